#include <cmath>
#include <map>

#include <doctest.h>

#include "qca/observables.hpp"

using namespace qca;

namespace {

TimeSeries power_law_series(double theta0, int t_max, double scale = 1.0) {
  TimeSeries s;
  for (int t = 1; t <= t_max; ++t) {
    TimeSeriesRow row;
    row.t = t;
    row.n = scale * std::pow(static_cast<double>(t), theta0);
    s.rows.push_back(row);
  }
  return s;
}

// theta(t) = theta0 + slope * (gamma - gamma_c) * t, realized through
// N(t) = t^theta0 * exp(a (gamma - gamma_c) t^2) up to log2 bookkeeping.
TimeSeries curved_series(double theta0, double gamma, double gamma_c, int t_max) {
  TimeSeries s;
  s.gamma = gamma;
  const double a = 2e-4;
  for (int t = 1; t <= t_max; ++t) {
    TimeSeriesRow row;
    row.t = t;
    row.n = std::pow(t, theta0) *
            std::exp(a * (gamma - gamma_c) * static_cast<double>(t) * t);
    s.rows.push_back(row);
  }
  return s;
}

}  // namespace

TEST_CASE("effective_exponent: exact power law is flat") {
  TimeSeries s = power_law_series(0.314, 40);
  auto theta = effective_exponent(s);
  REQUIRE(theta.size() == 20);  // even t only
  for (const auto& [t, th] : theta) {
    CHECK(t % 2 == 0);
    CHECK(th == doctest::Approx(0.314).epsilon(1e-12));
  }
}

TEST_CASE("effective_exponent: direct ratio and missing points") {
  TimeSeries s;
  for (int t = 1; t <= 4; ++t) {
    TimeSeriesRow row;
    row.t = t;
    row.n = (t == 2) ? 1.0 : (t == 4 ? 2.0 : 0.0);  // N(1) = N(3) = 0
    s.rows.push_back(row);
  }
  auto theta = effective_exponent(s);
  REQUIRE(theta.size() == 1);  // theta(2) missing since N(1) = 0
  CHECK(theta[0].first == 4);
  CHECK(theta[0].second == doctest::Approx(1.0));
}

TEST_CASE("effective_exponent: invariant under global rescaling") {
  TimeSeries a = curved_series(0.3, 1.01, 1.0, 50);
  TimeSeries b = a;
  for (auto& row : b.rows) row.n *= 37.5;
  auto ta = effective_exponent(a);
  auto tb = effective_exponent(b);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i)
    CHECK(ta[i].second == doctest::Approx(tb[i].second).epsilon(1e-12));
}

TEST_CASE("estimate_critical: selects the exact power law on a synthetic grid") {
  std::map<double, GammaSeries> grid;
  for (double gamma : {0.98, 0.99, 1.0, 1.01, 1.03})
    grid[gamma] = GammaSeries{curved_series(0.314, gamma, 1.0, 50), std::nullopt};

  CriticalEstimate est = estimate_critical(grid, {25, 50});
  CHECK(est.gamma_c == doctest::Approx(1.0));
  CHECK(est.theta == doctest::Approx(0.314).epsilon(1e-10));
  CHECK(est.gamma_error == doctest::Approx(0.01));
  CHECK(!est.boundary);
  CHECK(!est.one_sided);
  CHECK(est.theta_error > 0);
  // theta error equals the worse neighbour deviation
  const double dev_lo = std::abs(est.table[1].theta_mean - est.theta);
  const double dev_hi = std::abs(est.table[3].theta_mean - est.theta);
  CHECK(est.theta_error == doctest::Approx(std::max(dev_lo, dev_hi)));
}

TEST_CASE("estimate_critical: error bars shrink as the grid is refined") {
  auto run = [&](double spacing) {
    std::map<double, GammaSeries> grid;
    for (int k = -2; k <= 2; ++k) {
      const double gamma = 1.0 + spacing * k;
      grid[gamma] = GammaSeries{curved_series(0.31, gamma, 1.0, 60), std::nullopt};
    }
    return estimate_critical(grid, {30, 60});
  };
  CriticalEstimate coarse = run(0.02);
  CriticalEstimate fine = run(0.005);
  CHECK(coarse.gamma_c == doctest::Approx(1.0));
  CHECK(fine.gamma_c == doctest::Approx(1.0));
  CHECK(fine.gamma_error < coarse.gamma_error);
  CHECK(fine.theta_error < coarse.theta_error);
  CHECK(fine.theta_error >= 0);
}

TEST_CASE("estimate_critical: boundary selection is flagged") {
  std::map<double, GammaSeries> grid;
  for (double gamma : {1.0, 1.01, 1.02})
    grid[gamma] = GammaSeries{curved_series(0.3, gamma, 1.0, 50), std::nullopt};
  CriticalEstimate est = estimate_critical(grid, {25, 50});
  CHECK(est.gamma_c == doctest::Approx(1.0));
  CHECK(est.boundary);
  CHECK(est.one_sided);
}

TEST_CASE("estimate_critical: needs at least three grid values") {
  std::map<double, GammaSeries> grid;
  grid[1.0] = GammaSeries{curved_series(0.3, 1.0, 1.0, 50), std::nullopt};
  CHECK_THROWS_AS(estimate_critical(grid, {25, 50}), std::invalid_argument);
}

TEST_CASE("estimate_critical: finite-bond error from chi/2 series") {
  std::map<double, GammaSeries> grid;
  for (double gamma : {0.99, 1.0, 1.01}) {
    TimeSeries main = curved_series(0.31, gamma, 1.0, 50);
    TimeSeries half = main;
    for (auto& row : half.rows) row.n *= 1.0 + 1e-4;  // small bond-limited bias
    grid[gamma] = GammaSeries{main, half};
  }
  CriticalEstimate est = estimate_critical(grid, {25, 50});
  CHECK(est.chi_error_available);
  // delta N / N = 1e-4 at t and t/2 propagates to ~2e-4/ln2
  CHECK(est.chi_theta_error == doctest::Approx(2e-4 / std::log(2.0)).epsilon(1e-2));

  // identical chi/2 series give a zero error, not a missing one
  grid[1.0].half_chi = grid[1.0].main;
  CriticalEstimate est2 = estimate_critical(grid, {25, 50});
  CHECK(est2.chi_error_available);
  CHECK(est2.chi_theta_error == 0.0);
}
