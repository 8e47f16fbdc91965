#pragma once

#include <utility>

#include "qca/mps_mpo.hpp"
#include "qca/network.hpp"

namespace qca {

struct FitReport {
  int sweeps_used = 0;
  double final_distance = 0;   // Hilbert-space norm of the residual
  double observable_gap = 0;   // |N(exact network) - N(ansatz)|
  bool converged = false;      // the observable gap reached fit_tolerance
  bool monotone = true;        // objective never increased across updates
  double target_norm = 0;
  double init_distance = 0;    // residual of the warm start, before sweeping
  double zip_discarded = 0;    // weight dropped while contracting the target
  int zip_max_bond = 1;
};

/// Warm start per policy: contraction of the target network followed by
/// canonical SVD truncation to chi.
Mps init_ansatz(const TwoLayerNetwork& target, const CompressionPolicy& policy);

/// Variational single-site fit of a bounded-bond doubled MPS to the network.
std::pair<Mps, FitReport> variational_fit(const TwoLayerNetwork& target,
                                          const CompressionPolicy& policy);

/// The sweeping engine on an explicit doubled-space target MPS.
/// `observable_reference` is the occupation the gap is measured against.
std::pair<Mps, FitReport> variational_fit_mps(const Mps& target, const CompressionPolicy& policy,
                                              double observable_reference);

}  // namespace qca
