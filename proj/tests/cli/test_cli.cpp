#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qca/io.hpp"
#include "qca/sweep.hpp"

using namespace qca;
namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* bin = std::getenv("QCASIM_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = binary() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qcasim_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool rows_equal_ignoring_wall(const TimeSeries& a, const TimeSeries& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.t != y.t || x.length != y.length || x.n != y.n || x.trace_drift != y.trace_drift ||
        x.max_bond != y.max_bond || x.fit_residual != y.fit_residual || x.sweeps != y.sweeps ||
        x.converged != y.converged)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("evolve: gamma = 0 writes an all-zero N column") {
  TempDir tmp;
  const fs::path out = tmp.path / "run";
  const int rc = run("evolve --set gamma=0 --set t_max=6 --set chi=8 --set window=3,6 --set outdir=" +
                         out.string(),
                     tmp.path / "log");
  CHECK(rc == 0);
  TimeSeries series = read_series_csv((out / cell_stem(0.0, 0.0, 8, "alternating")).string() + ".csv");
  REQUIRE(series.rows.size() == 6);
  for (const auto& row : series.rows) CHECK(std::abs(row.n) <= 1e-14);
}

TEST_CASE("evolve: identical config reproduces identical physics columns") {
  TempDir tmp;
  const std::string common =
      "evolve --set gamma=1.034 --set omega=1.0 --set t_max=5 --set chi=12 --set window=2,5 "
      "--set trace_drift_max=1";
  const fs::path out_a = tmp.path / "a", out_b = tmp.path / "b";
  CHECK(run(common + " --set outdir=" + out_a.string(), tmp.path / "log_a") == 0);
  CHECK(run(common + " --set outdir=" + out_b.string(), tmp.path / "log_b") == 0);
  const std::string csv = cell_stem(1.0, 1.034, 12, "alternating") + ".csv";
  TimeSeries a = read_series_csv((out_a / csv).string());
  TimeSeries b = read_series_csv((out_b / csv).string());
  CHECK(rows_equal_ignoring_wall(a, b));
}

TEST_CASE("evolve: resume from a checkpoint reproduces the remaining rows") {
  TempDir tmp;
  const std::string base =
      "--set gamma=0.997 --set omega=1.0 --set chi=12 --set checkpoint_every=4 --set window=2,4 "
      "--set trace_drift_max=1";
  const fs::path full_dir = tmp.path / "full", part_dir = tmp.path / "part";

  CHECK(run("evolve " + base + " --set t_max=8 --set outdir=" + full_dir.string(),
            tmp.path / "log1") == 0);
  CHECK(run("evolve " + base + " --set t_max=4 --set outdir=" + part_dir.string(),
            tmp.path / "log2") == 0);
  CHECK(run("evolve " + base + " --set t_max=8 --set outdir=" + part_dir.string() + " --resume",
            tmp.path / "log3") == 0);

  const std::string csv = cell_stem(1.0, 0.997, 12, "alternating") + ".csv";
  TimeSeries full = read_series_csv((full_dir / csv).string());
  TimeSeries resumed = read_series_csv((part_dir / csv).string());
  CHECK(rows_equal_ignoring_wall(full, resumed));
}

TEST_CASE("evolve: dense check on and a bad config rejected") {
  TempDir tmp;
  CHECK(run("evolve --set gamma=1.1 --set omega=1.0 --set chi=64 --set t_max=6 --set window=3,6 "
            "--set dense_check=6 --set svd_cutoff=0 --set outdir=" +
                (tmp.path / "dc").string(),
            tmp.path / "log") == 0);
  CHECK(run("evolve --set scheme=bogus --set outdir=" + (tmp.path / "x").string(),
            tmp.path / "log_bad") != 0);
}

TEST_CASE("dkca: classical csv is byte-stable for a fixed seed") {
  TempDir tmp;
  const std::string common =
      "dkca --set p=0.65 --set runs=400 --set t_max=25 --set rng_seed=11 --set window=10,25";
  const fs::path out_a = tmp.path / "a", out_b = tmp.path / "b";
  CHECK(run(common + " --set outdir=" + out_a.string(), tmp.path / "log_a") == 0);
  CHECK(run(common + " --set outdir=" + out_b.string(), tmp.path / "log_b") == 0);
  const std::string name = "dkca_p1_0.65000_p2_0.65000_runs400_seed11.csv";
  CHECK(slurp(out_a / name) == slurp(out_b / name));
  ClassicalSeries series = read_classical_csv((out_a / name).string());
  REQUIRE(series.rows.size() == 25);
  CHECK(series.rows[0].stderr_n > 0);
}

TEST_CASE("sweep: produces per-cell CSVs, a manifest and analysis when the grid allows") {
  TempDir tmp;
  const fs::path out = tmp.path / "sweep";
  // two-point grid: cells only, analysis skipped, still exit 0
  CHECK(run("sweep --set gamma=0.9,1.0 --set chi=8,16 --set t_max=6 --set window=3,6 "
            "--set outdir=" +
                out.string(),
            tmp.path / "log") == 0);
  auto manifest = load_manifest(out.string());
  CHECK(manifest.at("cells").size() == 4);
  CHECK(manifest.at("kind") == "sweep");
  for (const auto& cell : manifest.at("cells"))
    CHECK(fs::exists(out / cell.at("csv").get<std::string>()));
  CHECK(!fs::exists(out / "summary.json"));

  // three-point grid: analysis runs and writes the summary + plots
  const fs::path out3 = tmp.path / "sweep3";
  CHECK(run("sweep --set gamma=0.95,0.997,1.05 --set chi=8,16 --set t_max=12 --set window=6,12 "
            "--set outdir=" +
                out3.string(),
            tmp.path / "log3") == 0);
  CHECK(fs::exists(out3 / "summary.json"));
  CHECK(fs::exists(out3 / "n_of_t.svg"));
  CHECK(fs::exists(out3 / "theta_of_t.svg"));
}

TEST_CASE("analyze: rejects undersized grids, works via the subcommand") {
  TempDir tmp;
  const fs::path out = tmp.path / "two";
  CHECK(run("sweep --set gamma=0.9,1.0 --set chi=8 --set t_max=6 --set window=3,6 --set outdir=" +
                out.string(),
            tmp.path / "log") == 0);
  const int rc = run("analyze " + out.string() + " --window 3 6", tmp.path / "log2");
  CHECK(rc != 0);
  CHECK(slurp(tmp.path / "log2").find("grid too small") != std::string::npos);

  const fs::path out3 = tmp.path / "three";
  CHECK(run("sweep --set gamma=0.9,0.997,1.1 --set chi=8 --set t_max=10 --set window=5,10 "
            "--set outdir=" +
                out3.string(),
            tmp.path / "log3") == 0);
  CHECK(run("analyze " + out3.string() + " --window 5 10 --no-plots", tmp.path / "log4") == 0);
  CHECK(fs::exists(out3 / "summary.json"));
}
