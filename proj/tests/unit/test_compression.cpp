#include <cmath>
#include <random>

#include <doctest.h>

#include "qca/compression.hpp"
#include "qca/evolution.hpp"
#include "test_helpers.hpp"

using namespace qca;
using qca::testing::mps_to_dense;
using qca::testing::random_mps;
using qca::testing::random_tensor;

namespace {

double fit_fidelity(const Mps& approx, const Mps& target) {
  const double num = std::abs(mps_overlap(approx, target));
  return num / (mps_norm(approx) * mps_norm(target));
}

}  // namespace

TEST_CASE("variational_fit_mps: target representable at chi converges in one sweep") {
  std::mt19937_64 gen(211);
  Mps target = random_mps(4, {1, 3, 4, 3, 1}, gen);
  CompressionPolicy policy;
  policy.chi = 8;
  const double n_ref = doubled_total_occupation(target).real();
  auto [fitted, report] = variational_fit_mps(target, policy, n_ref);
  CHECK(report.sweeps_used == 1);
  CHECK(report.converged);
  CHECK(report.final_distance <= 1e-10 * std::max(1.0, report.target_norm));
  CHECK(report.monotone);
}

TEST_CASE("variational_fit_mps: product-state target is exact at chi = 1") {
  std::mt19937_64 gen(223);
  Mps target = random_mps(4, {1, 1, 1, 1, 1}, gen);
  CompressionPolicy policy;
  policy.chi = 1;
  auto [fitted, report] =
      variational_fit_mps(target, policy, doubled_total_occupation(target).real());
  CHECK(report.final_distance <= 1e-10 * std::max(1.0, report.target_norm));
  CHECK(fit_fidelity(fitted, target) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("variational_fit_mps: at least as good as sequential Schmidt truncation") {
  std::mt19937_64 gen(227);
  Mps target = random_mps(4, {1, 4, 16, 16, 16, 4, 1}, gen);
  CompressionPolicy policy;
  policy.chi = 4;
  policy.svd_cutoff = 0;
  policy.max_sweeps = 24;

  auto [truncated, discarded] = mps_svd_truncate(target, policy);
  const double fid_svd = fit_fidelity(truncated, target);

  auto [fitted, report] =
      variational_fit_mps(target, policy, doubled_total_occupation(target).real());
  const double fid_fit = fit_fidelity(fitted, target);
  CHECK(report.monotone);
  CHECK(fid_fit >= fid_svd - 1e-6);
  // projection property in canonical gauge
  CHECK(mps_norm(fitted) <= report.target_norm + 1e-10);
  // warm start never beats the final fit
  CHECK(report.final_distance <= report.init_distance + 1e-10);
}

TEST_CASE("variational_fit: unbounded chi reproduces the exact network") {
  RowState s = seed_state();
  const auto gate = cached_gate(1.034, 1.0);
  const StepScheme scheme = StepScheme::alternating();
  CompressionPolicy unbounded = CompressionPolicy::unbounded();
  for (int t = 0; t < 2; ++t) s = apply_step(s, *gate, scheme, unbounded).first;

  TwoLayerNetwork net = build_step_network(extend_with_vacuum(s, scheme), *gate, scheme);
  auto [fitted, report] = variational_fit(net, unbounded);
  CHECK(report.observable_gap <= 1e-10);
  CHECK(report.monotone);
}

TEST_CASE("variational_fit: bounded chi on a real step network") {
  RowState s = seed_state();
  const auto gate = cached_gate(0.997, 1.0);
  const StepScheme scheme = StepScheme::alternating();
  for (int t = 0; t < 3; ++t) s = apply_step(s, *gate, scheme, CompressionPolicy::unbounded()).first;

  TwoLayerNetwork net = build_step_network(extend_with_vacuum(s, scheme), *gate, scheme);
  CompressionPolicy policy;
  policy.chi = 16;
  policy.fit_tolerance = 1e-9;
  policy.max_sweeps = 20;
  auto [fitted, report] = variational_fit(net, policy);
  CHECK(fitted.max_bond() <= 16);
  CHECK(report.monotone);
  CHECK(report.final_distance <= report.init_distance + 1e-12);
  // the fit keeps the local observable close even under real truncation
  CHECK(report.observable_gap < 1e-5);
}

TEST_CASE("init_ansatz: vacuum network gives the vacuum ansatz") {
  RowState vac = vacuum_row_state();
  const auto gate = cached_gate(0.9, 0.7);
  const StepScheme scheme = StepScheme::alternating();
  CompressionPolicy policy;
  policy.chi = 4;
  TwoLayerNetwork net = build_step_network(extend_with_vacuum(vac, scheme), *gate, scheme);
  Mps ansatz = init_ansatz(net, policy);
  REQUIRE(ansatz.length() == 2);
  Mpo rho = mps_to_mpo(ansatz);
  // all weight on the empty-empty diagonal element
  Tensor dense = qca::testing::mpo_to_dense(rho);
  CHECK(std::abs(dense.data[0] - cplx(1)) < 1e-12);
  double off = 0;
  for (std::size_t i = 1; i < dense.size(); ++i) off += std::abs(dense.data[i]);
  CHECK(off < 1e-12);
}

TEST_CASE("init_ansatz: chi at the exact rank reproduces the network state") {
  RowState s = seed_state();
  const auto gate = cached_gate(0.9, 0.5);
  const StepScheme scheme = StepScheme::alternating();
  s = apply_step(s, *gate, scheme, CompressionPolicy::unbounded()).first;
  TwoLayerNetwork net = build_step_network(extend_with_vacuum(s, scheme), *gate, scheme);

  Mps exact = network_zip_contract(net, kUnboundedRank, 0.0).mps;
  CompressionPolicy policy;
  policy.chi = exact.max_bond();
  Mps ansatz = init_ansatz(net, policy);
  CHECK(fit_fidelity(ansatz, exact) == doctest::Approx(1.0).epsilon(1e-10));
}
