#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qca/compression.hpp"
#include "qca/gates.hpp"
#include "qca/mps_mpo.hpp"
#include "qca/network.hpp"
#include "qca/scheme.hpp"
#include "qca/timeseries.hpp"

namespace qca {

/// The evolving finite-support row state rho(t). `left_offset` is measured in
/// half lattice spacings (rows of the tilted lattice shift by half a site per
/// step); the seed starts at 0 and the offset drops by one every step.
struct RowState {
  Mpo rho;
  int time = 0;
  int left_offset = 0;

  int length() const { return rho.length(); }
};

RowState seed_state();
RowState vacuum_row_state(int n_sites = 1);

/// The padded two-row configuration prior to gate application and tracing.
struct ExtendedState {
  std::vector<Tensor> controls;  // vacuum pads + rho sites + vacuum pads
  int n_targets = 0;
  int left_pads = 0;
  int right_pads = 0;
};

ExtendedState extend_with_vacuum(const RowState& s, const StepScheme& scheme);

/// Dress the extended state with the gate MPOs (in scheme order, bra and ket
/// sides) and trace the control row, producing the factorized network for
/// |rho(t)> in doubled space.
TwoLayerNetwork build_step_network(const ExtendedState& ext, const GateSpec& gate,
                                   const StepScheme& scheme);

struct StepOptions {
  bool renormalize_trace = true;
  bool hermitize = true;
  double trace_drift_max = 1e-4;
};

struct StepDiagnostics {
  double n_exact = 0;        // occupation of the exact post-step network
  std::vector<int> network_bonds;  // pre-compression composite bond profile
  int network_bond_max = 1;
  int zip_bond_max = 1;
  double zip_discarded = 0;
  int out_bond_max = 1;
  FitReport fit;
  double trace_drift = 0;      // |Tr - 1| before renormalization
  double herm_correction = 0;  // norm of the removed anti-Hermitian part
  bool drift_exceeded = false;
};

/// One application of the reduced map: extend, apply gates, trace, compress,
/// symmetrize, renormalize.
std::pair<RowState, StepDiagnostics> apply_step(const RowState& s, const GateSpec& gate,
                                                const StepScheme& scheme,
                                                const CompressionPolicy& policy,
                                                const StepOptions& options = {});

struct TrajectoryConfig {
  double gamma = 0.997;
  double omega = 0.0;
  StepScheme scheme = StepScheme::alternating();
  CompressionPolicy policy;
  GeneratorOrder generator_order = GeneratorOrder::up;
  int t_max = 50;
  bool vacuum_initial = false;
  StepOptions step;
  int checkpoint_every = 0;  // 0 disables checkpointing
  std::function<void(const RowState&)> checkpoint_sink;
  std::function<void(const TimeSeriesRow&, const RowState&, const StepDiagnostics&)> on_step;
  std::optional<RowState> resume_from;
};

/// Iterate apply_step from the seed (or a resumed state), recording N(t) and
/// diagnostics. Deterministic given the config. Stops early, with the series
/// flagged, if a step exceeds the trace-drift threshold.
TimeSeries run_trajectory(const TrajectoryConfig& config);

}  // namespace qca
