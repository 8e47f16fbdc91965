#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qca/dkca.hpp"
#include "qca/evolution.hpp"
#include "qca/timeseries.hpp"

namespace qca {

// Stable CSV schema; classical runs append a standard-error column.
inline constexpr const char* kQuantumCsvHeader =
    "t,L,N,trace_drift,max_bond,fit_residual,sweeps,converged,wall_ms";
inline constexpr const char* kClassicalCsvHeader =
    "t,L,N,trace_drift,max_bond,fit_residual,sweeps,converged,wall_ms,stderr_N";

std::string format_csv_row(const TimeSeriesRow& row);
void write_series_csv(const std::string& path, const TimeSeries& series);
/// Reads the data rows; run metadata (omega, gamma, chi, scheme) comes from
/// the sweep manifest and is filled in by the caller.
TimeSeries read_series_csv(const std::string& path);
void write_classical_csv(const std::string& path, const ClassicalSeries& series);
ClassicalSeries read_classical_csv(const std::string& path);

/// Declarative run configuration: `key = value` lines, '#' comments, plus
/// command-line overrides with the same syntax.
struct RunConfig {
  double omega = 0.0;
  std::vector<double> gammas = {0.997};
  std::vector<int> chis = {64};
  std::string scheme = "alternating";
  double svd_cutoff = 1e-14;
  double fit_tolerance = 1e-8;
  int max_sweeps = 12;
  int t_max = 50;
  int window_lo = 25;
  int window_hi = 50;
  int checkpoint_every = 0;
  std::string outdir = "qca-out";
  std::string initial = "seed";        // seed | vacuum
  std::string generator_order = "up";  // up | pu
  int parity_offset = 0;
  bool renormalize = true;
  double trace_drift_max = 1e-4;
  int dense_check = 0;  // compare against the dense reference up to this t
  bool plots = true;
  // classical runs
  double p1 = 0.70548515;  // site-class default: the 1D site-percolation
  double p2 = 0.70548515;  // threshold of this update geometry (literature value)
  int runs = 1000;
  std::uint64_t rng_seed = 1;
  int workers = 0;  // 0: QCASIM_WORKERS env, else half the hardware threads

  static RunConfig from_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);
  void apply_assignment(const std::string& text);  // "key=value"
  std::string canonical_text() const;
  std::string hash() const;  // FNV-1a over canonical_text
  int effective_workers() const;
  void validate() const;
};

TrajectoryConfig to_trajectory_config(const RunConfig& cfg, double gamma, int chi);
DkConfig to_dk_config(const RunConfig& cfg);

/// File stem for one sweep cell, e.g. "omega0.0000_gamma0.99700_chi64_alternating".
std::string cell_stem(double omega, double gamma, int chi, const std::string& scheme);

}  // namespace qca
