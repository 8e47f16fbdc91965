#include "qca/compression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qca {

namespace {

Tensor unit_env() {
  Tensor e({1, 1});
  e.data[0] = 1.0;
  return e;
}

// envL'[alpha', D'] = sum conj(q[alpha, d, alpha']) envL[alpha, D] t[D, d, D']
Tensor advance_left(const Tensor& env, const Tensor& q, const Tensor& t) {
  Tensor tmp = contract(env, t, {{1, 0}});          // (alpha, d, D')
  return contract(conj(q), tmp, {{0, 0}, {1, 1}});  // (alpha', D')
}

// envR'[alpha, D] = sum conj(q[alpha, d, alpha']) t[D, d, D'] envR[alpha', D']
Tensor advance_right(const Tensor& env, const Tensor& q, const Tensor& t) {
  Tensor tmp = contract(t, env, {{2, 1}});          // (D, d, alpha')
  return contract(conj(q), tmp, {{1, 1}, {2, 2}});  // (alpha, D)
}

}  // namespace

std::pair<Mps, FitReport> variational_fit_mps(const Mps& target, const CompressionPolicy& policy,
                                              double observable_reference) {
  const int n = target.length();
  FitReport rep;
  const double t2 = std::max(0.0, mps_overlap(target, target).real());
  rep.target_norm = std::sqrt(t2);
  const double slack = 1e-12 * std::max(1.0, t2);

  // Residuals through the overlap formula cancel once the fit is essentially
  // exact; below that floor, fall back to the explicit difference state.
  auto residual = [&](const Mps& approx) {
    const double a2 = std::max(0.0, mps_overlap(approx, approx).real());
    const cplx cross = mps_overlap(target, approx);
    const double diff2 = t2 + a2 - 2 * cross.real();
    if (diff2 > 1e-13 * std::max(t2, 1.0)) return std::sqrt(std::max(0.0, diff2));
    return mps_distance(target, approx);
  };

  auto [ansatz, init_discarded] = mps_svd_truncate(target, policy);
  (void)init_discarded;
  rep.init_distance = residual(ansatz);

  // ansatz from the truncation sweep has its center at site 0: sites > 0 are
  // right isometries, exactly the gauge the first left-to-right pass needs.
  std::vector<Tensor> env_l(n + 1), env_r(n + 1);
  env_l[0] = unit_env();
  env_r[n] = unit_env();
  for (int i = n - 1; i >= 1; --i)
    env_r[i] = advance_right(env_r[i + 1], ansatz.sites[i], target.sites[i]);

  double objective = rep.init_distance * rep.init_distance;
  double prev_sweep_objective = objective;
  double last_norm2 = 0;

  auto update_site = [&](int i) {
    Tensor cand = contract(env_l[i], target.sites[i], {{1, 0}});  // (alpha, d, D')
    cand = contract(cand, env_r[i + 1], {{2, 1}});                // (alpha, d, alpha')
    double norm2 = 0;
    for (const auto& v : cand.data) norm2 += std::norm(v);
    const double obj = t2 - norm2;
    if (obj > objective + slack) rep.monotone = false;
    objective = obj;
    last_norm2 = norm2;
    return cand;
  };

  for (int sweep = 1; sweep <= policy.max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      Tensor cand = update_site(i);
      if (i == n - 1) {
        ansatz.sites[i] = std::move(cand);
      } else {
        const auto [bl, d, br] = std::tuple(cand.shape[0], cand.shape[1], cand.shape[2]);
        auto [q, r] = qr(reshape(std::move(cand), {bl * d, br}));
        (void)r;
        const std::size_t k = q.shape[1];
        ansatz.sites[i] = reshape(std::move(q), {bl, d, k});
        env_l[i + 1] = advance_left(env_l[i], ansatz.sites[i], target.sites[i]);
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      Tensor cand = update_site(i);
      if (i == 0) {
        ansatz.sites[i] = std::move(cand);
      } else {
        const auto [bl, d, br] = std::tuple(cand.shape[0], cand.shape[1], cand.shape[2]);
        auto [l, q] = lq(reshape(std::move(cand), {bl, d * br}));
        (void)l;
        const std::size_t k = q.shape[0];
        ansatz.sites[i] = reshape(std::move(q), {k, d, br});
        env_r[i] = advance_right(env_r[i + 1], ansatz.sites[i], target.sites[i]);
      }
    }
    ansatz.center = 0;
    rep.sweeps_used = sweep;

    const double n_ansatz = doubled_total_occupation(ansatz).real();
    rep.observable_gap = std::abs(n_ansatz - observable_reference);
    if (rep.observable_gap <= policy.fit_tolerance) {
      rep.converged = true;
      break;
    }
    const double decrease = prev_sweep_objective - objective;
    if (decrease < 1e-9 * std::max(prev_sweep_objective, 1e-300)) break;
    prev_sweep_objective = objective;
  }

  const double cheap2 = t2 - last_norm2;
  rep.final_distance = (cheap2 > 1e-13 * std::max(t2, 1.0)) ? std::sqrt(std::max(0.0, cheap2))
                                                            : mps_distance(target, ansatz);
  return {std::move(ansatz), rep};
}

Mps init_ansatz(const TwoLayerNetwork& target, const CompressionPolicy& policy) {
  ZipResult zip = network_zip_contract(target, policy.zip_limit(), policy.svd_cutoff);
  return mps_svd_truncate(zip.mps, policy).first;
}

std::pair<Mps, FitReport> variational_fit(const TwoLayerNetwork& target,
                                          const CompressionPolicy& policy) {
  ZipResult zip = network_zip_contract(target, policy.zip_limit(), policy.svd_cutoff);
  const double n_exact = network_total_occupation(target);
  auto [fitted, rep] = variational_fit_mps(zip.mps, policy, n_exact);
  rep.zip_discarded = zip.discarded;
  rep.zip_max_bond = zip.max_bond;
  return {std::move(fitted), rep};
}

}  // namespace qca
