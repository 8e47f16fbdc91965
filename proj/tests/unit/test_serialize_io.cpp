#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "qca/io.hpp"
#include "qca/serialize.hpp"
#include "test_helpers.hpp"

using namespace qca;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qcasim_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("container round trip is bit exact") {
  TempDir tmp;
  std::mt19937_64 gen(71);
  Mpo m;
  m.sites.push_back(qca::testing::random_tensor({1, 2, 2, 3}, gen));
  m.sites.push_back(qca::testing::random_tensor({3, 2, 2, 2}, gen));
  m.sites.push_back(qca::testing::random_tensor({2, 2, 2, 1}, gen));

  const std::string path = (tmp.path / "state.mpo").string();
  save_mpo(path, m, {{"note", "test"}});
  auto [loaded, meta] = load_mpo(path);
  CHECK(meta.at("note") == "test");
  REQUIRE(loaded.length() == 3);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(loaded.sites[i].shape == m.sites[i].shape);
    for (std::size_t k = 0; k < m.sites[i].size(); ++k)
      CHECK(loaded.sites[i].data[k] == m.sites[i].data[k]);
  }
}

TEST_CASE("row-state checkpoint carries time and offset") {
  TempDir tmp;
  RowState s = seed_state();
  s.time = 7;
  s.left_offset = -7;
  const std::string path = (tmp.path / "row.ckpt").string();
  save_row_state(path, s, {{"gamma", 0.997}});
  auto [loaded, meta] = load_row_state(path);
  CHECK(loaded.time == 7);
  CHECK(loaded.left_offset == -7);
  CHECK(meta.at("gamma").get<double>() == 0.997);
  CHECK(loaded.length() == 1);
}

TEST_CASE("load rejects foreign files") {
  TempDir tmp;
  const std::string path = (tmp.path / "junk.bin").string();
  std::ofstream(path) << "definitely not a container";
  CHECK_THROWS(load_mpo(path));
}

TEST_CASE("quantum csv round trip preserves values and the pinned header") {
  TempDir tmp;
  TimeSeries series;
  series.gamma = 0.997;
  for (int t = 1; t <= 5; ++t) {
    TimeSeriesRow row;
    row.t = t;
    row.length = t + 1;
    row.n = 1.234567890123456789 * t;
    row.trace_drift = 1e-12 * t;
    row.max_bond = t;
    row.fit_residual = 1e-8 / t;
    row.sweeps = t;
    row.converged = t % 2 == 0;
    row.wall_ms = 10.5 * t;
    series.rows.push_back(row);
  }
  const std::string path = (tmp.path / "series.csv").string();
  write_series_csv(path, series);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,L,N,trace_drift,max_bond,fit_residual,sweeps,converged,wall_ms");

  TimeSeries loaded = read_series_csv(path);
  REQUIRE(loaded.rows.size() == series.rows.size());
  for (std::size_t i = 0; i < series.rows.size(); ++i) {
    CHECK(loaded.rows[i].t == series.rows[i].t);
    CHECK(loaded.rows[i].n == series.rows[i].n);  // %.17g survives the round trip
    CHECK(loaded.rows[i].trace_drift == series.rows[i].trace_drift);
    CHECK(loaded.rows[i].converged == series.rows[i].converged);
  }
}

TEST_CASE("classical csv carries the standard-error column") {
  TempDir tmp;
  ClassicalSeries series;
  for (int t = 1; t <= 3; ++t) {
    ClassicalSeriesRow row;
    row.t = t;
    row.length = t + 1;
    row.n = 2.0 * t;
    row.stderr_n = 0.01 * t;
    series.rows.push_back(row);
  }
  const std::string path = (tmp.path / "classical.csv").string();
  write_classical_csv(path, series);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t,L,N,trace_drift,max_bond,fit_residual,sweeps,converged,wall_ms,stderr_N");
  ClassicalSeries loaded = read_classical_csv(path);
  REQUIRE(loaded.rows.size() == 3);
  CHECK(loaded.rows[2].stderr_n == series.rows[2].stderr_n);
}

TEST_CASE("run config: file parsing, overrides and hashing") {
  TempDir tmp;
  const std::string path = (tmp.path / "run.cfg").string();
  std::ofstream(path) << "omega = 1.0\n"
                      << "gamma = 1.03, 1.034, 1.04  # the grid\n"
                      << "chi = 32, 64\n"
                      << "t_max = 50\n"
                      << "window = 25, 50\n"
                      << "scheme = alternating\n";
  RunConfig cfg = RunConfig::from_file(path);
  CHECK(cfg.omega == 1.0);
  REQUIRE(cfg.gammas.size() == 3);
  CHECK(cfg.gammas[1] == 1.034);
  REQUIRE(cfg.chis.size() == 2);
  CHECK(cfg.window_hi == 50);
  cfg.validate();

  const std::string hash_before = cfg.hash();
  cfg.apply_assignment("gamma=0.997");
  CHECK(cfg.gammas.size() == 1);
  CHECK(cfg.hash() != hash_before);

  CHECK_THROWS_AS(cfg.apply("nonsense_key", "1"), std::invalid_argument);
  RunConfig bad = cfg;
  bad.t_max = 10;  // window no longer covered
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RunConfig unsorted = cfg;
  unsorted.chis = {64, 32};
  CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);
}

TEST_CASE("cell_stem is stable") {
  CHECK(cell_stem(0.0, 0.997, 64, "alternating") == "omega0.0000_gamma0.99700_chi64_alternating");
}
