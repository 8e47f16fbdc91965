#pragma once

#include <cstdint>
#include <vector>

namespace qca {

/// Classical cellular-automaton Monte Carlo on the same tilted lattice from a
/// single seed. Site coordinates are in half lattice spacings (matching
/// RowState::left_offset); a child at h has parents at h-1 and h+1.
struct DkConfig {
  double p1 = 0.70548515;  // occupation probability given one occupied parent
  double p2 = 0.70548515;  // given two occupied parents (site class: p1 == p2)
  int t_max = 200;
  int runs = 1000;
  std::uint64_t rng_seed = 1;
};

struct ClassicalSeriesRow {
  int t = 0;
  int length = 0;       // mean support length over runs
  double n = 0;         // mean N(t)
  double stderr_n = 0;  // sample stddev / sqrt(runs)
};

struct ClassicalSeries {
  DkConfig config;
  std::vector<ClassicalSeriesRow> rows;
};

/// Counter-based uniform draw in [0, 1); identical for a given key regardless
/// of scheduling, which keeps parallel ensembles reproducible.
double dk_uniform(std::uint64_t seed, std::uint64_t run, std::uint64_t t, std::int64_t site);

/// One row update. `row` holds occupied half-coordinates, strictly ascending.
std::vector<std::int64_t> dk_step(const std::vector<std::int64_t>& row, const DkConfig& cfg,
                                  std::uint64_t run, int t);

/// Ensemble mean and standard error of N(t), reproducible from rng_seed.
/// `workers` > 1 parallelizes over fixed run blocks with a deterministic
/// reduction order.
ClassicalSeries dk_run(const DkConfig& cfg, int workers = 1);

}  // namespace qca
