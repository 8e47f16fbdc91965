#include "qca/dkca.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qca {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

double dk_uniform(std::uint64_t seed, std::uint64_t run, std::uint64_t t, std::int64_t site) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ run);
  h = mix64(h ^ t);
  h = mix64(h ^ static_cast<std::uint64_t>(site));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<std::int64_t> dk_step(const std::vector<std::int64_t>& row, const DkConfig& cfg,
                                  std::uint64_t run, int t) {
  std::vector<std::int64_t> child;
  child.reserve(row.size() + 1);
  // Candidate children of an occupied parent at h sit at h-1 and h+1; walk
  // the sorted parent list once.
  std::size_t i = 0;
  while (i < row.size()) {
    const std::int64_t h = row[i];
    for (std::int64_t c : {h - 1, h + 1}) {
      if (!child.empty() && child.back() >= c) continue;  // already decided
      const bool left_parent = std::binary_search(row.begin(), row.end(), c - 1);
      const bool right_parent = std::binary_search(row.begin(), row.end(), c + 1);
      const int parents = (left_parent ? 1 : 0) + (right_parent ? 1 : 0);
      if (parents == 0) continue;
      const double p = parents == 2 ? cfg.p2 : cfg.p1;
      if (dk_uniform(cfg.rng_seed, run, static_cast<std::uint64_t>(t), c) < p)
        child.push_back(c);
    }
    ++i;
  }
  return child;
}

namespace {

struct Accumulator {
  std::vector<double> n_sum, n_sq_sum;
  std::vector<long long> len_sum;

  explicit Accumulator(int t_max) : n_sum(t_max, 0), n_sq_sum(t_max, 0), len_sum(t_max, 0) {}

  void add(const Accumulator& other) {
    for (std::size_t i = 0; i < n_sum.size(); ++i) {
      n_sum[i] += other.n_sum[i];
      n_sq_sum[i] += other.n_sq_sum[i];
      len_sum[i] += other.len_sum[i];
    }
  }
};

void run_block(const DkConfig& cfg, std::uint64_t run_begin, std::uint64_t run_end,
               Accumulator& acc) {
  for (std::uint64_t run = run_begin; run < run_end; ++run) {
    std::vector<std::int64_t> row = {0};  // the seed
    for (int t = 1; t <= cfg.t_max; ++t) {
      if (!row.empty()) row = dk_step(row, cfg, run, t);
      const double n = static_cast<double>(row.size());
      acc.n_sum[t - 1] += n;
      acc.n_sq_sum[t - 1] += n * n;
      acc.len_sum[t - 1] += row.empty() ? 0 : (row.back() - row.front()) / 2 + 1;
    }
  }
}

}  // namespace

ClassicalSeries dk_run(const DkConfig& cfg, int workers) {
  if (cfg.p1 < 0 || cfg.p1 > 1 || cfg.p2 < 0 || cfg.p2 > 1)
    throw std::invalid_argument("dk_run: probabilities must lie in [0, 1]");
  if (cfg.runs < 1) throw std::invalid_argument("dk_run: need at least one run");

  // Fixed-size run blocks reduced in block order: the aggregate is identical
  // for any worker count.
  const std::uint64_t total = static_cast<std::uint64_t>(cfg.runs);
  const std::uint64_t block = 1024;
  const std::size_t n_blocks = static_cast<std::size_t>((total + block - 1) / block);
  std::vector<Accumulator> parts(n_blocks, Accumulator(cfg.t_max));

  workers = std::max(1, std::min<int>(workers, static_cast<int>(n_blocks)));
  std::atomic<std::size_t> next_block{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const std::uint64_t begin = b * block;
      const std::uint64_t end = std::min(total, begin + block);
      run_block(cfg, begin, end, parts[b]);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();

  Accumulator acc(cfg.t_max);
  for (const auto& part : parts) acc.add(part);

  ClassicalSeries series;
  series.config = cfg;
  const double runs = static_cast<double>(cfg.runs);
  for (int t = 1; t <= cfg.t_max; ++t) {
    const double mean = acc.n_sum[t - 1] / runs;
    const double var = std::max(0.0, acc.n_sq_sum[t - 1] / runs - mean * mean);
    ClassicalSeriesRow row;
    row.t = t;
    row.n = mean;
    row.stderr_n = cfg.runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
    row.length = static_cast<int>(std::llround(static_cast<double>(acc.len_sum[t - 1]) / runs));
    series.rows.push_back(row);
  }
  return series;
}

}  // namespace qca
