#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qca/io.hpp"
#include "qca/serialize.hpp"
#include "qca/sweep.hpp"
#include "qca/version.hpp"

namespace fs = std::filesystem;
using namespace qca;

namespace {

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> overrides;
};

RunConfig build_config(const CommonArgs& args) {
  RunConfig cfg = args.config_file.empty() ? RunConfig{} : RunConfig::from_file(args.config_file);
  for (const auto& assignment : args.overrides) cfg.apply_assignment(assignment);
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_file, "key = value configuration file");
  cmd->add_option("-s,--set", args.overrides, "override a config key, e.g. --set gamma=0.997");
}

void write_single_manifest(const RunConfig& cfg, const std::string& kind,
                           const nlohmann::json& cells) {
  nlohmann::json manifest;
  manifest["tool"] = "qcasim";
  manifest["version"] = kVersion;
  manifest["kind"] = kind;
  manifest["config_hash"] = cfg.hash();
  manifest["config"] = cfg.canonical_text();
  manifest["cells"] = cells;
  std::ofstream out(fs::path(cfg.outdir) / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

int cmd_evolve(const CommonArgs& args, bool resume) {
  RunConfig cfg = build_config(args);
  const double gamma = cfg.gammas.front();
  const int chi = cfg.chis.front();
  CellOutcome cell = run_quantum_cell(cfg, gamma, chi, resume);

  nlohmann::json cells = nlohmann::json::array();
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
  cells.push_back(j);
  write_single_manifest(cfg, "evolve", cells);

  std::printf("evolve: gamma=%.6g chi=%d t_max=%d -> %s (%s)\n", gamma, chi, cfg.t_max,
              (fs::path(cfg.outdir) / cell.csv).c_str(), cell.status.c_str());
  if (cell.status != "ok") {
    std::fprintf(stderr, "evolve failed: %s\n", cell.status.c_str());
    return 1;
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  const bool cells_ok = run_sweep(cfg);
  std::printf("sweep: %zu gamma x %zu chi cells -> %s\n", cfg.gammas.size(), cfg.chis.size(),
              cfg.outdir.c_str());

  if (cfg.gammas.size() >= 3) {
    AnalyzeResult res =
        analyze_directory(cfg.outdir, {cfg.window_lo, cfg.window_hi}, cfg.plots);
    if (res.ok) {
      std::printf("analysis: gamma_c = %.6g +/- %.2g, theta = %.4g +/- %.2g (chi err %.2g)\n",
                  res.estimate.gamma_c, res.estimate.gamma_error, res.estimate.theta,
                  res.estimate.theta_error, res.estimate.chi_theta_error);
      std::printf("summary: %s\n", res.summary_path.c_str());
    } else {
      std::fprintf(stderr, "analysis skipped: %s\n", res.message.c_str());
    }
  }
  if (!cells_ok) std::fprintf(stderr, "sweep: some cells failed or were flagged\n");
  return cells_ok ? 0 : 1;
}

int cmd_dkca(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  DkConfig dk = to_dk_config(cfg);
  ClassicalSeries series = dk_run(dk, cfg.effective_workers());

  fs::create_directories(cfg.outdir);
  char stem[96];
  std::snprintf(stem, sizeof(stem), "dkca_p1_%.5f_p2_%.5f_runs%d_seed%llu.csv", dk.p1, dk.p2,
                dk.runs, static_cast<unsigned long long>(dk.rng_seed));
  const std::string csv = stem;
  write_classical_csv((fs::path(cfg.outdir) / csv).string(), series);

  nlohmann::json cells = nlohmann::json::array();
  nlohmann::json j;
  j["p1"] = dk.p1;
  j["p2"] = dk.p2;
  j["runs"] = dk.runs;
  j["rng_seed"] = dk.rng_seed;
  j["t_max"] = dk.t_max;
  j["csv"] = csv;
  j["status"] = "ok";
  cells.push_back(j);
  write_single_manifest(cfg, "dkca", cells);

  std::printf("dkca: %d runs to t=%d -> %s\n", dk.runs, dk.t_max,
              (fs::path(cfg.outdir) / csv).c_str());
  return 0;
}

int cmd_analyze(const std::string& dir, std::pair<int, int> window, bool plots) {
  AnalyzeResult res = analyze_directory(dir, window, plots);
  if (!res.ok) {
    std::fprintf(stderr, "analyze: %s\n", res.message.c_str());
    return 1;
  }
  std::printf("gamma_c = %.6g +/- %.2g\n", res.estimate.gamma_c, res.estimate.gamma_error);
  std::printf("theta   = %.4g +/- %.2g (finite-chi error %.2g%s)\n", res.estimate.theta,
              res.estimate.theta_error, res.estimate.chi_theta_error,
              res.estimate.chi_error_available ? "" : ", chi/2 data missing");
  if (res.estimate.boundary)
    std::printf("warning: gamma_c sits on the grid boundary; widen the grid\n");
  std::printf("summary: %s\n", res.summary_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed evolutions of (1+1)D quantum cellular automata with an absorbing state"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs evolve_args, sweep_args, dkca_args;
  bool resume = false;

  CLI::App* evolve = app.add_subcommand("evolve", "run one quantum trajectory");
  add_common(evolve, evolve_args);
  evolve->add_flag("--resume", resume, "continue from the newest checkpoint");
  int dense_check_t = 0;
  evolve->add_option("--dense-check", dense_check_t,
                     "compare N(t) against the dense reference up to this t");

  CLI::App* sweep = app.add_subcommand("sweep", "run a gamma/chi grid, then analyze it");
  add_common(sweep, sweep_args);

  CLI::App* dkca = app.add_subcommand("dkca", "classical cellular-automaton ensemble");
  add_common(dkca, dkca_args);

  std::string analyze_dir;
  std::vector<int> window = {25, 50};
  bool no_plots = false;
  CLI::App* analyze = app.add_subcommand("analyze", "critical-point estimate over sweep output");
  analyze->add_option("dir", analyze_dir, "sweep output directory")->required();
  analyze->add_option("--window", window, "averaging window, two values")->expected(2);
  analyze->add_flag("--no-plots", no_plots, "skip the SVG panels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) {
      if (dense_check_t > 0)
        evolve_args.overrides.push_back("dense_check=" + std::to_string(dense_check_t));
      return cmd_evolve(evolve_args, resume);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (dkca->parsed()) return cmd_dkca(dkca_args);
    if (analyze->parsed()) return cmd_analyze(analyze_dir, {window[0], window[1]}, !no_plots);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
