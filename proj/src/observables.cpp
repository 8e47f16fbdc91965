#include "qca/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qca {

cplx total_occupation_full(const RowState& s) {
  return doubled_total_occupation(mpo_to_doubled_mps(s.rho));
}

double total_occupation(const RowState& s) { return total_occupation_full(s).real(); }

std::vector<std::pair<double, double>> density_profile(const RowState& s) {
  const Mps doubled = mpo_to_doubled_mps(s.rho);
  const Tensor num = Tensor::ketbra(1, 1);
  std::vector<std::pair<double, double>> profile;
  profile.reserve(s.length());
  for (int k = 0; k < s.length(); ++k) {
    const double x = 0.5 * s.left_offset + k;
    profile.emplace_back(x, doubled_local_expectation(doubled, k, num).real());
  }
  return profile;
}

std::vector<std::pair<int, double>> effective_exponent(const TimeSeries& series) {
  std::map<int, double> n_of_t;
  for (const auto& row : series.rows) n_of_t[row.t] = row.n;
  std::vector<std::pair<int, double>> theta;
  for (const auto& [t, n] : n_of_t) {
    if (t % 2 != 0) continue;
    auto half = n_of_t.find(t / 2);
    if (half == n_of_t.end()) continue;
    if (half->second <= 0 || n <= 0) continue;  // missing, not zero
    theta.emplace_back(t, std::log2(n / half->second));
  }
  return theta;
}

namespace {

struct WindowStats {
  double avg_abs_gradient = 0;
  double theta_mean = 0;
  bool usable = false;
};

WindowStats window_stats(const TimeSeries& series, int lo, int hi) {
  WindowStats stats;
  std::vector<std::pair<int, double>> pts;
  for (const auto& [t, th] : effective_exponent(series))
    if (t >= lo && t <= hi) pts.emplace_back(t, th);
  if (pts.size() < 2) return stats;

  double grad_acc = 0, theta_acc = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dt = pts[i + 1].first - pts[i].first;
    grad_acc += std::abs((pts[i + 1].second - pts[i].second) / dt);
  }
  for (const auto& [t, th] : pts) theta_acc += th;
  stats.avg_abs_gradient = grad_acc / static_cast<double>(pts.size() - 1);
  stats.theta_mean = theta_acc / static_cast<double>(pts.size());
  stats.usable = true;
  return stats;
}

}  // namespace

CriticalEstimate estimate_critical(const std::map<double, GammaSeries>& by_gamma,
                                   std::pair<int, int> window) {
  if (by_gamma.size() < 3)
    throw std::invalid_argument("estimate_critical: need at least 3 grid values");
  const auto [lo, hi] = window;

  CriticalEstimate est;
  est.window_lo = lo;
  est.window_hi = hi;

  std::vector<double> gammas;
  for (const auto& [gamma, series] : by_gamma) {
    WindowStats stats = window_stats(series.main, lo, hi);
    est.table.push_back({gamma, stats.avg_abs_gradient, stats.theta_mean, stats.usable});
    gammas.push_back(gamma);
  }

  int best = -1;
  for (std::size_t i = 0; i < est.table.size(); ++i) {
    if (!est.table[i].usable) continue;
    if (best < 0 || est.table[i].avg_abs_gradient < est.table[best].avg_abs_gradient)
      best = static_cast<int>(i);
  }
  if (best < 0) throw std::runtime_error("estimate_critical: no usable theta(t) curve in window");

  est.gamma_c = est.table[best].gamma;
  est.theta = est.table[best].theta_mean;
  est.boundary = (best == 0) || (best + 1 == static_cast<int>(est.table.size()));

  // Grid-resolution error: the larger spacing to the adjacent grid values.
  double gamma_err = 0;
  int neighbours = 0;
  double theta_err = 0;
  int theta_neighbours = 0;
  for (int nb : {best - 1, best + 1}) {
    if (nb < 0 || nb >= static_cast<int>(est.table.size())) continue;
    gamma_err = std::max(gamma_err, std::abs(est.table[nb].gamma - est.gamma_c));
    ++neighbours;
    if (est.table[nb].usable) {
      theta_err = std::max(theta_err, std::abs(est.table[nb].theta_mean - est.theta));
      ++theta_neighbours;
    }
  }
  est.gamma_error = gamma_err;
  est.theta_error = theta_err;
  est.one_sided = neighbours < 2 || theta_neighbours < 2;

  // Finite-bond error at gamma_c: |N_chi - N_chi/2| propagated through the
  // log ratio, maximized over even t in the window.
  const GammaSeries& chosen = by_gamma.at(est.gamma_c);
  if (chosen.half_chi) {
    std::map<int, double> n_hi, n_lo;
    for (const auto& row : chosen.main.rows) n_hi[row.t] = row.n;
    for (const auto& row : chosen.half_chi->rows) n_lo[row.t] = row.n;
    double worst = 0;
    bool any = false;
    for (int t = lo + (lo % 2); t <= hi; t += 2) {
      if (!n_hi.count(t) || !n_lo.count(t) || !n_hi.count(t / 2) || !n_lo.count(t / 2)) continue;
      if (n_hi[t] <= 0 || n_hi[t / 2] <= 0) continue;
      const double dn_t = std::abs(n_hi[t] - n_lo[t]);
      const double dn_h = std::abs(n_hi[t / 2] - n_lo[t / 2]);
      const double dtheta = (dn_t / n_hi[t] + dn_h / n_hi[t / 2]) / std::log(2.0);
      worst = std::max(worst, dtheta);
      any = true;
    }
    est.chi_theta_error = worst;
    est.chi_error_available = any;
  }
  return est;
}

}  // namespace qca
