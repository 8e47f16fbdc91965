#include "qca/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "qca/oracle.hpp"
#include "qca/serialize.hpp"
#include "qca/svg.hpp"
#include "qca/version.hpp"

namespace fs = std::filesystem;

namespace qca {

int dense_check_horizon(const StepScheme& scheme, int site_limit) {
  // The active dense window peaks at L_{t-1} + 4 (alternating) or
  // L_{t-1} + 5 (odd-even) sites while stepping towards t.
  int t = 0, length = 1;
  for (;;) {
    const int peak = length + (scheme.kind == SchemeKind::alternating ? 4 : 5);
    if (peak > site_limit) return t;
    ++t;
    length += scheme.growth();
  }
}

CellOutcome run_quantum_cell(const RunConfig& cfg, double gamma, int chi, bool resume) {
  CellOutcome cell;
  cell.gamma = gamma;
  cell.chi = chi;

  const std::string stem = cell_stem(cfg.omega, gamma, chi, StepScheme::parse(cfg.scheme).name());
  cell.csv = stem + ".csv";
  const fs::path dir(cfg.outdir);
  const fs::path csv_path = dir / cell.csv;
  // checkpoints are named by (omega, gamma, chi, scheme, t)
  auto ckpt_path = [&](int t) {
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_t%06d.ckpt", t);
    return dir / (stem + suffix);
  };
  auto latest_checkpoint = [&]() -> std::string {
    std::string best;
    int best_t = -1;
    if (!fs::exists(dir)) return best;
    const std::string prefix = stem + "_t";
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".ckpt") continue;
      const int t = std::atoi(name.substr(prefix.size(), 6).c_str());
      if (t > best_t) {
        best_t = t;
        best = entry.path().string();
      }
    }
    return best;
  };

  const auto started = std::chrono::steady_clock::now();
  try {
    fs::create_directories(dir);
    TrajectoryConfig traj = to_trajectory_config(cfg, gamma, chi);

    std::vector<TimeSeriesRow> kept_rows;
    if (resume) {
      const std::string newest = latest_checkpoint();
      if (newest.empty())
        throw std::runtime_error("no checkpoint to resume from under " + dir.string());
      auto [state, meta] = load_row_state(newest);
      traj.resume_from = state;
      if (fs::exists(csv_path))
        for (const auto& row : read_series_csv(csv_path.string()).rows)
          if (row.t <= state.time) kept_rows.push_back(row);
    }

    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << kQuantumCsvHeader << '\n';
    for (const auto& row : kept_rows) out << format_csv_row(row) << '\n';
    out.flush();

    // Dense reference for the first steps, when requested.
    std::vector<double> dense_reference;
    if (cfg.dense_check > 0 && cfg.initial == "seed") {
      const int horizon =
          std::min({cfg.dense_check, cfg.t_max, dense_check_horizon(traj.scheme)});
      dense_reference = dense_occupation_series(gamma, cfg.omega, traj.scheme, horizon,
                                                traj.generator_order);
    }

    traj.on_step = [&](const TimeSeriesRow& row, const RowState&, const StepDiagnostics&) {
      out << format_csv_row(row) << '\n';
      out.flush();
      cell.max_drift = std::max(cell.max_drift, row.trace_drift);
      cell.converged_all = cell.converged_all && row.converged;
      if (row.t - 1 < static_cast<int>(dense_reference.size()) &&
          std::abs(row.n - dense_reference[row.t - 1]) > 1e-8) {
        throw std::runtime_error("dense check failed at t = " + std::to_string(row.t));
      }
    };
    traj.checkpoint_sink = [&](const RowState& state) {
      nlohmann::json meta;
      meta["omega"] = cfg.omega;
      meta["gamma"] = gamma;
      meta["chi"] = chi;
      meta["scheme"] = traj.scheme.name();
      save_row_state(ckpt_path(state.time).string(), state, meta);
    };

    TimeSeries series = run_trajectory(traj);
    series.omega = cfg.omega;
    cell.series = std::move(series);
    if (!kept_rows.empty()) {
      kept_rows.insert(kept_rows.end(), cell.series.rows.begin(), cell.series.rows.end());
      cell.series.rows = kept_rows;
    }
    cell.status = cell.series.drift_failed ? "trace drift exceeded threshold" : "ok";
  } catch (const std::exception& err) {
    cell.status = err.what();
    cell.converged_all = false;
  }
  cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           started)
                     .count();
  return cell;
}

namespace {

nlohmann::json cell_to_json(const RunConfig& cfg, const CellOutcome& cell) {
  nlohmann::json j;
  j["omega"] = cfg.omega;
  j["gamma"] = cell.gamma;
  j["chi"] = cell.chi;
  j["scheme"] = StepScheme::parse(cfg.scheme).name();
  j["csv"] = cell.csv;
  j["status"] = cell.status;
  j["converged_all"] = cell.converged_all;
  j["max_drift"] = cell.max_drift;
  j["wall_ms"] = cell.wall_ms;
  return j;
}

void write_manifest_file(const std::string& dir, const nlohmann::json& manifest) {
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

}  // namespace

bool run_sweep(const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.outdir);

  struct Task {
    double gamma;
    int chi;
  };
  std::vector<Task> tasks;
  for (double gamma : cfg.gammas)
    for (int chi : cfg.chis) tasks.push_back({gamma, chi});

  nlohmann::json manifest;
  manifest["tool"] = "qcasim";
  manifest["version"] = kVersion;
  manifest["kind"] = "sweep";
  manifest["config_hash"] = cfg.hash();
  manifest["config"] = cfg.canonical_text();
  manifest["cells"] = nlohmann::json::array();

  std::mutex manifest_mutex;  // the single serialization point
  std::atomic<std::size_t> next{0};
  std::atomic<bool> all_ok{true};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      CellOutcome cell = run_quantum_cell(cfg, tasks[i].gamma, tasks[i].chi);
      // converged_all stays a per-cell diagnostic; only completion failures
      // and invariant violations (drift, dense check) fail the sweep.
      if (cell.status != "ok") all_ok = false;
      std::lock_guard<std::mutex> lock(manifest_mutex);
      manifest["cells"].push_back(cell_to_json(cfg, cell));
      write_manifest_file(cfg.outdir, manifest);
    }
  };

  const int workers = std::min<int>(cfg.effective_workers(), static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return all_ok.load();
}

nlohmann::json load_manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir);
  nlohmann::json manifest;
  in >> manifest;
  return manifest;
}

AnalyzeResult analyze_directory(const std::string& dir, std::pair<int, int> window, bool plots) {
  AnalyzeResult result;
  nlohmann::json manifest;
  try {
    manifest = load_manifest(dir);
  } catch (const std::exception& err) {
    result.message = err.what();
    return result;
  }

  // gamma -> chi -> series
  std::map<double, std::map<int, TimeSeries>> grid;
  double omega = 0;
  std::string scheme;
  for (const auto& cell : manifest.at("cells")) {
    if (cell.at("status").get<std::string>() != "ok") continue;
    TimeSeries series = read_series_csv((fs::path(dir) / cell.at("csv").get<std::string>()).string());
    series.omega = cell.at("omega").get<double>();
    series.gamma = cell.at("gamma").get<double>();
    series.chi = cell.at("chi").get<int>();
    series.scheme = cell.at("scheme").get<std::string>();
    omega = series.omega;
    scheme = series.scheme;
    grid[series.gamma][series.chi] = std::move(series);
  }
  if (grid.size() < 3) {
    result.message = "grid too small: need at least 3 gamma values";
    return result;
  }

  int chi_top = 0;
  for (const auto& [gamma, by_chi] : grid)
    for (const auto& [chi, series] : by_chi) chi_top = std::max(chi_top, chi);

  bool half_missing = false;
  std::map<double, GammaSeries> input;
  for (const auto& [gamma, by_chi] : grid) {
    auto top = by_chi.find(chi_top);
    if (top == by_chi.end()) continue;
    GammaSeries gs;
    gs.main = top->second;
    auto half = by_chi.find(chi_top / 2);
    if (half != by_chi.end())
      gs.half_chi = half->second;
    else
      half_missing = true;
    input[gamma] = std::move(gs);
  }
  if (input.size() < 3) {
    result.message = "grid too small: need at least 3 gamma values at the top chi";
    return result;
  }

  try {
    result.estimate = estimate_critical(input, window);
  } catch (const std::exception& err) {
    result.message = err.what();
    return result;
  }

  nlohmann::json summary;
  summary["omega"] = omega;
  summary["scheme"] = scheme;
  summary["chi"] = chi_top;
  summary["chi_half"] = chi_top / 2;
  summary["gamma_c"] = result.estimate.gamma_c;
  summary["gamma_error"] = result.estimate.gamma_error;
  summary["theta"] = result.estimate.theta;
  summary["theta_error"] = result.estimate.theta_error;
  summary["chi_theta_error"] = result.estimate.chi_theta_error;
  summary["chi_error_available"] = result.estimate.chi_error_available;
  summary["window"] = {window.first, window.second};
  summary["boundary"] = result.estimate.boundary;
  summary["one_sided"] = result.estimate.one_sided;
  summary["grid"] = nlohmann::json::array();
  summary["flatness"] = nlohmann::json::array();
  for (const auto& entry : result.estimate.table) {
    summary["grid"].push_back(entry.gamma);
    nlohmann::json row;
    row["gamma"] = entry.gamma;
    row["avg_abs_gradient"] = entry.avg_abs_gradient;
    row["theta_mean"] = entry.theta_mean;
    row["usable"] = entry.usable;
    summary["flatness"].push_back(row);
  }
  if (half_missing) summary["warning"] = "chi/2 series missing for some gamma; chi error partial";

  const fs::path summary_path = fs::path(dir) / "summary.json";
  std::ofstream out(summary_path, std::ios::trunc);
  out << summary.dump(2) << '\n';
  result.summary_path = summary_path.string();

  if (plots) {
    std::vector<PlotSeries> n_series, theta_series;
    for (const auto& [gamma, gs] : input) {
      PlotSeries n_plot, th_plot;
      char label[40];
      std::snprintf(label, sizeof(label), "gamma=%.4g", gamma);
      n_plot.label = label;
      th_plot.label = label;
      for (const auto& row : gs.main.rows)
        n_plot.points.emplace_back(static_cast<double>(row.t), row.n);
      for (const auto& [t, theta] : effective_exponent(gs.main))
        th_plot.points.emplace_back(static_cast<double>(t), theta);
      n_series.push_back(std::move(n_plot));
      theta_series.push_back(std::move(th_plot));
    }
    PlotSpec n_spec;
    n_spec.title = "Total occupation N(t)";
    n_spec.x_label = "t";
    n_spec.y_label = "N(t)";
    n_spec.log_x = true;
    n_spec.log_y = true;
    write_svg_plot((fs::path(dir) / "n_of_t.svg").string(), n_spec, n_series);

    PlotSpec th_spec;
    th_spec.title = "Effective exponent theta(t)";
    th_spec.x_label = "t";
    th_spec.y_label = "theta(t)";
    write_svg_plot((fs::path(dir) / "theta_of_t.svg").string(), th_spec, theta_series);
  }

  result.ok = true;
  return result;
}

}  // namespace qca
