#include "qca/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qca {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(trim(item));
  return parts;
}

}  // namespace

std::string format_csv_row(const TimeSeriesRow& row) {
  std::ostringstream out;
  out << row.t << ',' << row.length << ',' << fmt(row.n) << ',' << fmt(row.trace_drift) << ','
      << row.max_bond << ',' << fmt(row.fit_residual) << ',' << row.sweeps << ','
      << (row.converged ? 1 : 0) << ',' << fmt(row.wall_ms);
  return out.str();
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kQuantumCsvHeader << '\n';
  for (const auto& row : series.rows) out << format_csv_row(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
  if (trim(line) != kQuantumCsvHeader)
    throw std::runtime_error("unexpected csv header in " + path);
  TimeSeries series;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 9) throw std::runtime_error("malformed csv row in " + path);
    TimeSeriesRow row;
    row.t = std::stoi(parts[0]);
    row.length = std::stoi(parts[1]);
    row.n = std::stod(parts[2]);
    row.trace_drift = std::stod(parts[3]);
    row.max_bond = std::stoi(parts[4]);
    row.fit_residual = std::stod(parts[5]);
    row.sweeps = std::stoi(parts[6]);
    row.converged = parts[7] == "1";
    row.wall_ms = std::stod(parts[8]);
    series.rows.push_back(row);
  }
  return series;
}

void write_classical_csv(const std::string& path, const ClassicalSeries& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kClassicalCsvHeader << '\n';
  for (const auto& row : series.rows) {
    TimeSeriesRow q;
    q.t = row.t;
    q.length = row.length;
    q.n = row.n;
    q.converged = true;
    out << format_csv_row(q) << ',' << fmt(row.stderr_n) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ClassicalSeries read_classical_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kClassicalCsvHeader)
    throw std::runtime_error("unexpected classical csv header in " + path);
  ClassicalSeries series;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 10) throw std::runtime_error("malformed csv row in " + path);
    ClassicalSeriesRow row;
    row.t = std::stoi(parts[0]);
    row.length = std::stoi(parts[1]);
    row.n = std::stod(parts[2]);
    row.stderr_n = std::stod(parts[9]);
    series.rows.push_back(row);
  }
  return series;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::apply_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got: " + text);
  apply(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  auto as_bool = [&](const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("bad boolean for " + key + ": " + v);
  };
  if (key == "omega") omega = std::stod(value);
  else if (key == "gamma") {
    gammas.clear();
    for (const auto& g : split(value, ',')) gammas.push_back(std::stod(g));
  } else if (key == "chi") {
    chis.clear();
    for (const auto& c : split(value, ',')) chis.push_back(std::stoi(c));
  } else if (key == "scheme") scheme = value;
  else if (key == "svd_cutoff") svd_cutoff = std::stod(value);
  else if (key == "fit_tolerance") fit_tolerance = std::stod(value);
  else if (key == "max_sweeps") max_sweeps = std::stoi(value);
  else if (key == "t_max") t_max = std::stoi(value);
  else if (key == "window") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw std::invalid_argument("window wants lo,hi");
    window_lo = std::stoi(parts[0]);
    window_hi = std::stoi(parts[1]);
  } else if (key == "checkpoint_every") checkpoint_every = std::stoi(value);
  else if (key == "outdir") outdir = value;
  else if (key == "initial") initial = value;
  else if (key == "generator_order") generator_order = value;
  else if (key == "parity_offset") parity_offset = std::stoi(value);
  else if (key == "renormalize") renormalize = as_bool(value);
  else if (key == "trace_drift_max") trace_drift_max = std::stod(value);
  else if (key == "dense_check") dense_check = std::stoi(value);
  else if (key == "plots") plots = as_bool(value);
  else if (key == "p1") p1 = std::stod(value);
  else if (key == "p2") p2 = std::stod(value);
  else if (key == "p") p1 = p2 = std::stod(value);
  else if (key == "runs") runs = std::stoi(value);
  else if (key == "rng_seed") rng_seed = std::stoull(value);
  else if (key == "workers") workers = std::stoi(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  out << "checkpoint_every = " << checkpoint_every << '\n';
  out << "chi = ";
  for (std::size_t i = 0; i < chis.size(); ++i) out << (i ? "," : "") << chis[i];
  out << '\n';
  out << "dense_check = " << dense_check << '\n';
  out << "fit_tolerance = " << fmt(fit_tolerance) << '\n';
  out << "gamma = ";
  for (std::size_t i = 0; i < gammas.size(); ++i) out << (i ? "," : "") << fmt(gammas[i]);
  out << '\n';
  out << "generator_order = " << generator_order << '\n';
  out << "initial = " << initial << '\n';
  out << "max_sweeps = " << max_sweeps << '\n';
  out << "omega = " << fmt(omega) << '\n';
  out << "p1 = " << fmt(p1) << '\n';
  out << "p2 = " << fmt(p2) << '\n';
  out << "parity_offset = " << parity_offset << '\n';
  out << "plots = " << (plots ? "true" : "false") << '\n';
  out << "renormalize = " << (renormalize ? "true" : "false") << '\n';
  out << "rng_seed = " << rng_seed << '\n';
  out << "runs = " << runs << '\n';
  out << "scheme = " << scheme << '\n';
  out << "svd_cutoff = " << fmt(svd_cutoff) << '\n';
  out << "t_max = " << t_max << '\n';
  out << "trace_drift_max = " << fmt(trace_drift_max) << '\n';
  out << "window = " << window_lo << ',' << window_hi << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  // FNV-1a, 64-bit
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("QCASIM_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, hw / 2);
}

void RunConfig::validate() const {
  if (gammas.empty()) throw std::invalid_argument("config: gamma grid is empty");
  if (chis.empty()) throw std::invalid_argument("config: chi list is empty");
  if (!std::is_sorted(chis.begin(), chis.end()))
    throw std::invalid_argument("config: chi list must be sorted ascending");
  for (int c : chis)
    if (c < 1) throw std::invalid_argument("config: chi must be >= 1");
  if (t_max < 1) throw std::invalid_argument("config: t_max must be >= 1");
  if (window_lo > window_hi) throw std::invalid_argument("config: window lo > hi");
  if (t_max < window_hi)
    throw std::invalid_argument("config: t_max must cover the analysis window");
  if (scheme != "alternating" && scheme != "odd_even" && scheme != "odd-even")
    throw std::invalid_argument("config: unknown scheme " + scheme);
  if (initial != "seed" && initial != "vacuum")
    throw std::invalid_argument("config: initial must be seed or vacuum");
  if (generator_order != "up" && generator_order != "pu")
    throw std::invalid_argument("config: generator_order must be up or pu");
  if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1)
    throw std::invalid_argument("config: probabilities must lie in [0, 1]");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
}

TrajectoryConfig to_trajectory_config(const RunConfig& cfg, double gamma, int chi) {
  TrajectoryConfig out;
  out.gamma = gamma;
  out.omega = cfg.omega;
  StepScheme scheme = StepScheme::parse(cfg.scheme);
  scheme.parity_offset = cfg.parity_offset;
  out.scheme = scheme;
  out.policy.chi = chi;
  out.policy.svd_cutoff = cfg.svd_cutoff;
  out.policy.fit_tolerance = cfg.fit_tolerance;
  out.policy.max_sweeps = cfg.max_sweeps;
  out.generator_order = cfg.generator_order == "pu" ? GeneratorOrder::pu : GeneratorOrder::up;
  out.t_max = cfg.t_max;
  out.vacuum_initial = cfg.initial == "vacuum";
  out.step.renormalize_trace = cfg.renormalize;
  out.step.trace_drift_max = cfg.trace_drift_max;
  out.checkpoint_every = cfg.checkpoint_every;
  return out;
}

DkConfig to_dk_config(const RunConfig& cfg) {
  DkConfig out;
  out.p1 = cfg.p1;
  out.p2 = cfg.p2;
  out.t_max = cfg.t_max;
  out.runs = cfg.runs;
  out.rng_seed = cfg.rng_seed;
  return out;
}

std::string cell_stem(double omega, double gamma, int chi, const std::string& scheme) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "omega%.4f_gamma%.5f_chi%d_%s", omega, gamma, chi,
                scheme.c_str());
  return buf;
}

}  // namespace qca
