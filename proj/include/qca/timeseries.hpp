#pragma once

#include <string>
#include <vector>

namespace qca {

struct TimeSeriesRow {
  int t = 0;
  int length = 0;
  double n = 0;              // total occupation N(t)
  double trace_drift = 0;    // |Tr rho - 1| before renormalization
  int max_bond = 1;
  double fit_residual = 0;   // Hilbert-space distance of the compression fit
  int sweeps = 0;
  bool converged = true;
  double wall_ms = 0;
};

struct TimeSeries {
  double omega = 0;
  double gamma = 0;
  int chi = 0;
  std::string scheme;
  std::vector<TimeSeriesRow> rows;
  bool drift_failed = false;  // a step exceeded the trace-drift threshold

  double cumulative_drift() const {
    double acc = 0;
    for (const auto& r : rows) acc += r.trace_drift;
    return acc;
  }
};

}  // namespace qca
