#include "qca/evolution.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qca/observables.hpp"

namespace qca {

RowState seed_state() {
  RowState s;
  s.rho = product_mpo(1, Tensor::ketbra(1, 1));
  return s;
}

RowState vacuum_row_state(int n_sites) {
  RowState s;
  s.rho = product_mpo(n_sites, Tensor::ketbra(0, 0));
  return s;
}

ExtendedState extend_with_vacuum(const RowState& s, const StepScheme& scheme) {
  validate_mpo(s.rho);
  const auto [pl, pr] = scheme.pads();
  ExtendedState ext;
  ext.left_pads = pl;
  ext.right_pads = pr;
  ext.n_targets = scheme.target_count(s.length());
  const Tensor pad = reshape(Tensor::ketbra(0, 0), {1, 2, 2, 1});
  for (int i = 0; i < pl; ++i) ext.controls.push_back(pad);
  for (const auto& site : s.rho.sites) ext.controls.push_back(site);
  for (int i = 0; i < pr; ++i) ext.controls.push_back(pad);
  return ext;
}

namespace {

// Composition of the (at most two) gate-site tensors acting on one control,
// ordered so the earlier-applied gate sits next to the row tensor:
// K[gL, gR, s, o] maps the row's out leg o to the final out leg s.
Tensor control_ket_kernel(const std::vector<Tensor>& chain, int a, int n_targets,
                          const std::vector<int>& pos) {
  const Tensor& left_site = chain[2];   // gate a-1 ends here
  const Tensor& right_site = chain[0];  // gate a begins here
  const bool has_left = a >= 1;
  const bool has_right = a <= n_targets - 1;
  if (has_left && has_right) {
    const std::size_t gl = left_site.shape[0], gr = right_site.shape[3];
    Tensor k;
    if (pos[a - 1] < pos[a]) {
      // gate a-1 first: o -> left_site -> x -> right_site -> s
      k = contract(right_site, left_site, {{2, 1}});  // (1, s, gR, gL, o, 1)
      k = permute(k, {3, 2, 1, 4, 0, 5});
    } else {
      // gate a first: o -> right_site -> x -> left_site -> s
      k = contract(left_site, right_site, {{2, 1}});  // (gL, s, 1, 1, o, gR)
      k = permute(k, {0, 5, 1, 4, 2, 3});
    }
    return reshape(std::move(k), {gl, gr, 2, 2});
  }
  if (has_right) return permute(right_site, {0, 3, 1, 2});  // (1, gR, s, o)
  if (has_left) return permute(left_site, {0, 3, 1, 2});    // (gL, 1, s, o)
  throw std::logic_error("control with no adjacent gate");
}

}  // namespace

TwoLayerNetwork build_step_network(const ExtendedState& ext, const GateSpec& gate,
                                   const StepScheme& scheme) {
  const int n = ext.n_targets;
  const int m = static_cast<int>(ext.controls.size());
  if (m != n + 1) throw std::logic_error("extended state geometry mismatch");

  const std::vector<Tensor> chain = gate_chain_mpo(gate);
  const std::vector<int> order = scheme.gate_order(n);
  std::vector<int> pos(n);
  for (int k = 0; k < static_cast<int>(order.size()); ++k) pos[order[k]] = k;

  // Target kernel: the gate's middle site with its in leg closed on vacuum,
  // times the conjugate for the bra layer.
  const std::size_t g1 = chain[1].shape[0], g2 = chain[1].shape[3];
  Tensor kt({g1, 2, g2});
  for (std::size_t a = 0; a < g1; ++a)
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t b = 0; b < g2; ++b) kt.at({a, p, b}) = chain[1].at({a, p, 0, b});
  Tensor target_kernel = contract(kt, conj(kt), {});          // (gLk,p_out,gRk, gLb,p_in,gRb)
  target_kernel = permute(target_kernel, {0, 3, 1, 4, 2, 5});  // (gLk,gLb,p_out,p_in,gRk,gRb)

  TwoLayerNetwork net;
  net.n_targets = n;
  net.sites.reserve(2 * n + 1);
  for (int a = 0; a <= n; ++a) {
    Tensor ket = control_ket_kernel(chain, a, n, pos);
    Tensor kernel = contract(ket, conj(ket), {{2, 2}});  // (gLk,gRk,o, gLb,gRb,i)
    kernel = permute(kernel, {0, 3, 2, 5, 1, 4});        // (gLk,gLb,o,i,gRk,gRb)
    NetworkSite control;
    control.traced = true;
    control.base = ext.controls[a];
    control.kernel = std::move(kernel);
    net.sites.push_back(std::move(control));
    if (a < n) {
      NetworkSite target;
      target.traced = false;
      target.kernel = target_kernel;
      net.sites.push_back(std::move(target));
    }
  }
  return net;
}

std::pair<RowState, StepDiagnostics> apply_step(const RowState& s, const GateSpec& gate,
                                                const StepScheme& scheme,
                                                const CompressionPolicy& policy,
                                                const StepOptions& options) {
  ExtendedState ext = extend_with_vacuum(s, scheme);
  TwoLayerNetwork net = build_step_network(ext, gate, scheme);

  StepDiagnostics diag;
  diag.network_bonds = network_bond_profile(net);
  diag.network_bond_max = network_max_bond(net);
  diag.n_exact = network_total_occupation(net);

  auto [state, report] = variational_fit(net, policy);
  diag.fit = report;
  diag.zip_bond_max = report.zip_max_bond;
  diag.zip_discarded = report.zip_discarded;

  if (options.hermitize) {
    Mps adjoint = doubled_dagger(state);
    const double n2 = std::max(0.0, mps_overlap(state, state).real());
    const double cross = mps_overlap(adjoint, state).real();
    diag.herm_correction = 0.5 * std::sqrt(std::max(0.0, 2 * n2 - 2 * cross));
    state = mps_svd_truncate(mps_scale(mps_add(state, adjoint), 0.5), policy).first;
  }

  const cplx trace = doubled_trace(state);
  diag.trace_drift = std::abs(trace - cplx(1));
  diag.drift_exceeded = diag.trace_drift > options.trace_drift_max;
  if (options.renormalize_trace && std::abs(trace) > 1e-14)
    state = mps_scale(std::move(state), cplx(1) / trace);

  RowState out;
  out.rho = mps_to_mpo(state);
  out.time = s.time + 1;
  out.left_offset = s.left_offset - 1;
  diag.out_bond_max = out.rho.max_bond();
  return {std::move(out), diag};
}

TimeSeries run_trajectory(const TrajectoryConfig& config) {
  TimeSeries series;
  series.omega = config.omega;
  series.gamma = config.gamma;
  series.chi = config.policy.chi;
  series.scheme = config.scheme.name();

  const auto gate = cached_gate(config.gamma, config.omega, config.generator_order);
  RowState state = config.resume_from
                       ? *config.resume_from
                       : (config.vacuum_initial ? vacuum_row_state() : seed_state());

  for (int t = state.time + 1; t <= config.t_max; ++t) {
    const auto start = std::chrono::steady_clock::now();
    auto [next, diag] = apply_step(state, *gate, config.scheme, config.policy, config.step);
    state = std::move(next);
    const auto stop = std::chrono::steady_clock::now();

    TimeSeriesRow row;
    row.t = t;
    row.length = state.length();
    row.n = total_occupation(state);
    row.trace_drift = diag.trace_drift;
    row.max_bond = state.rho.max_bond();
    row.fit_residual = diag.fit.final_distance;
    row.sweeps = diag.fit.sweeps_used;
    row.converged = diag.fit.converged && !diag.drift_exceeded;
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    series.rows.push_back(row);

    if (config.on_step) config.on_step(row, state, diag);
    const bool cadence_hit = config.checkpoint_every > 0 &&
                             (t % config.checkpoint_every == 0 || t == config.t_max);
    if (cadence_hit && config.checkpoint_sink) config.checkpoint_sink(state);

    if (diag.drift_exceeded) {
      series.drift_failed = true;
      break;
    }
  }
  return series;
}

}  // namespace qca
