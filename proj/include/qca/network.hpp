#pragma once

#include <utility>
#include <vector>

#include "qca/mps_mpo.hpp"
#include "qca/tensor.hpp"

namespace qca {

/// One position along the contraction path of the post-step two-layer
/// network (the gate-dressed extended state with the control row traced).
/// Composite bonds between positions carry (ket gate bond, row bond,
/// bra gate bond), in that order.
struct NetworkSite {
  bool traced = false;  // control-row position: physical legs traced inside the kernel
  /// Controls: the row tensor (bl, 2, 2, br) the kernel closes over.
  Tensor base;
  /// Kernel axes (gLk, gLb, o, i, gRk, gRb). For controls (o, i) contract the
  /// base; for targets they are the open physical legs (vacuum base folded in).
  Tensor kernel;
};

/// Network for |rho(t)> in doubled space, chain order C_0 T_0 C_1 ... C_n.
struct TwoLayerNetwork {
  std::vector<NetworkSite> sites;
  int n_targets = 0;
};

/// Tr rho(t), evaluated exactly by a boundary-vector sweep.
cplx network_trace(const TwoLayerNetwork& net);

/// Tr(op_k rho(t)) for every target site k, one prefix/suffix pass.
std::vector<cplx> network_site_expectations(const TwoLayerNetwork& net, const Tensor& op);

/// Sum of Tr(n_k rho(t)); the exact-network reference for compression.
double network_total_occupation(const TwoLayerNetwork& net);

/// Composite bond dimensions of the exact network, one per internal bond of
/// the would-be output MPO.
std::vector<int> network_bond_profile(const TwoLayerNetwork& net);
/// Largest composite bond dimension of the exact network.
int network_max_bond(const TwoLayerNetwork& net);

struct ZipResult {
  Mps mps;               // doubled-space MPS over the targets
  double discarded = 0;  // cumulative relative discarded weight
  int max_bond = 1;      // largest bond revealed during the contraction
};

/// Contract the network into a doubled-space MPS left to right, splitting at
/// every target with the given rank cap and cutoff. With an unbounded cap and
/// zero cutoff this is exact up to the numerical-noise floor.
ZipResult network_zip_contract(const TwoLayerNetwork& net, std::size_t max_bond, double cutoff);

}  // namespace qca
