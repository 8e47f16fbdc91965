#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qca/evolution.hpp"
#include "qca/timeseries.hpp"

namespace qca {

/// N(t) = sum_k Tr(n_k rho); real part (the imaginary residue is a
/// truncation diagnostic, available via total_occupation_full).
double total_occupation(const RowState& s);
cplx total_occupation_full(const RowState& s);

/// Per-site occupations with absolute lattice coordinates (in units of the
/// lattice spacing; half-integer on every other row).
std::vector<std::pair<double, double>> density_profile(const RowState& s);

/// Effective exponent theta(t) = log2[N(t)/N(t/2)], defined at even t only;
/// points with N(t/2) or N(t) <= 0 are reported as missing (dropped).
std::vector<std::pair<int, double>> effective_exponent(const TimeSeries& series);

struct FlatnessEntry {
  double gamma = 0;
  double avg_abs_gradient = 0;  // mean |d theta / dt| over the window
  double theta_mean = 0;
  bool usable = false;
};

struct CriticalEstimate {
  double gamma_c = 0;
  double gamma_error = 0;
  double theta = 0;
  double theta_error = 0;
  double chi_theta_error = 0;  // finite-bond error propagated to theta
  bool chi_error_available = false;
  bool boundary = false;   // gamma_c landed on the grid edge; widen the grid
  bool one_sided = false;  // fewer than two usable neighbours for the errors
  int window_lo = 0;
  int window_hi = 0;
  std::vector<FlatnessEntry> table;
};

struct GammaSeries {
  TimeSeries main;                    // highest-chi run
  std::optional<TimeSeries> half_chi;  // chi/2 run for the finite-bond error
};

/// Critical-point selection: the grid value whose theta(t) is closest to a
/// constant over the window (smallest mean absolute forward difference over
/// consecutive even t), with grid-spacing and neighbour-deviation error bars.
CriticalEstimate estimate_critical(const std::map<double, GammaSeries>& by_gamma,
                                   std::pair<int, int> window);

}  // namespace qca
