#pragma once

#include <memory>
#include <vector>

#include "qca/tensor.hpp"

namespace qca {

/// Single-site operators in the (empty, occupied) basis: index 0 = empty.
struct PauliSet {
  Tensor sigma_plus;   // |1><0|
  Tensor sigma_minus;  // |0><1|
  Tensor sigma_y;      // -i|1><0| + i|0><1|
  Tensor sigma_z;      // |1><1| - |0><0|
  Tensor number_op;    // |1><1|
  Tensor identity;

  static const PauliSet& get();
};

/// Order of the two-body factors in the gate generator. The factors do not
/// commute away from omega = 0, so the order is load-bearing;
/// `up` (entangler applied after the projector) is the default reading.
enum class GeneratorOrder { up, pu };

/// The three-site controlled gate: an 8x8 unitary over
/// (control-left, control-right, target) plus its 3-site MPO factorization
/// with the target site last.
struct GateSpec {
  double gamma = 0;
  double omega = 0;
  GeneratorOrder order = GeneratorOrder::up;
  Tensor unitary;                // 8x8
  std::vector<Tensor> mpo_form;  // 3 sites (bl, out, in, br), bonds <= 4
};

/// P = 1 - |00><00| on the two control sites.
Tensor build_projector();

/// U = exp(-i omega [sz x sy + sy x sz]) on the two control sites.
Tensor build_entangler(double omega);

/// G = exp(-i gamma (U P sigma+ + h.c.)); annihilates nothing on the vacuum
/// triple, which stays an exact fixed point.
GateSpec build_gate(double gamma, double omega, GeneratorOrder order = GeneratorOrder::up);

/// Two successive zero-cutoff splits of the unitary into sites ordered
/// (control-left, control-right, target).
std::vector<Tensor> gate_to_mpo(const GateSpec& g);

/// Alternative factorization ordered along the evolution contraction path
/// (control-left, target, control-right).
std::vector<Tensor> gate_chain_mpo(const GateSpec& g);

/// Process-wide cache; gate construction is pure, the cached spec immutable.
std::shared_ptr<const GateSpec> cached_gate(double gamma, double omega,
                                            GeneratorOrder order = GeneratorOrder::up);

}  // namespace qca
