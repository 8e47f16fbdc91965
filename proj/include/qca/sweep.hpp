#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "qca/io.hpp"
#include "qca/observables.hpp"

namespace qca {

struct CellOutcome {
  double gamma = 0;
  int chi = 0;
  std::string csv;     // file name inside the output directory
  std::string status;  // "ok" or an error description
  bool converged_all = true;
  double max_drift = 0;
  double wall_ms = 0;
  TimeSeries series;
};

/// Largest t the dense reference can reach for this scheme (active window of
/// `site_limit` qubits).
int dense_check_horizon(const StepScheme& scheme, int site_limit = 12);

/// One quantum trajectory cell: writes <outdir>/<stem>.csv row by row, plus
/// checkpoints at the configured cadence. With `resume`, continues from the
/// newest checkpoint and keeps the already-written rows up to its time.
CellOutcome run_quantum_cell(const RunConfig& cfg, double gamma, int chi, bool resume = false);

/// Fan out all (gamma, chi) cells over a worker pool, then write the sweep
/// manifest. Returns true when every cell completed without flags.
bool run_sweep(const RunConfig& cfg);

struct AnalyzeResult {
  bool ok = false;
  std::string message;
  CriticalEstimate estimate;
  std::string summary_path;
};

/// S3-style analysis over a sweep directory: read the manifest and the cell
/// CSVs, pick gamma_c by theta-flatness, write summary.json and (optionally)
/// the N(t) and theta(t) SVG panels.
AnalyzeResult analyze_directory(const std::string& dir, std::pair<int, int> window, bool plots);

nlohmann::json load_manifest(const std::string& dir);

}  // namespace qca
