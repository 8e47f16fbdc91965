#pragma once

#include <vector>

#include "qca/gates.hpp"
#include "qca/scheme.hpp"
#include "qca/tensor.hpp"

namespace qca {

/// Numerically exact reduced row state for small supports, used as ground
/// truth in tests. `left_offset` counts half lattice spacings (consecutive
/// rows of the tilted lattice are shifted by half a site); the seed sits at 0.
struct DenseRowState {
  Tensor matrix;  // 2^length x 2^length density matrix
  int time = 0;
  int left_offset = 0;
  int length = 1;
};

DenseRowState dense_seed_state();
DenseRowState dense_vacuum_state();

/// One exact application of the reduced map: embed in the padded two-row
/// space, conjugate by the ordered gate product, trace out the control row.
/// Sites are attached and traced lazily so the active window stays at
/// length + a few sites; refuses if it would exceed `site_limit` qubits.
DenseRowState dense_step(const DenseRowState& s, const GateSpec& gate,
                         const StepScheme& scheme, int site_limit = 12);

/// Engine primitive behind dense_step: applies the gates in the given target
/// order. dense_step passes scheme.dense_order(); passing scheme.gate_order()
/// reproduces the literal ordering at a larger memory footprint.
DenseRowState dense_step_ordered(const DenseRowState& s, const GateSpec& gate,
                                 const StepScheme& scheme, const std::vector<int>& order,
                                 int site_limit);

double dense_total_occupation(const DenseRowState& s);
std::vector<double> dense_site_occupations(const DenseRowState& s);
cplx dense_trace(const DenseRowState& s);

/// N(t) for t = 1..t_max from the seed, all steps exact.
std::vector<double> dense_occupation_series(double gamma, double omega,
                                            const StepScheme& scheme, int t_max,
                                            GeneratorOrder order = GeneratorOrder::up,
                                            int site_limit = 12);

}  // namespace qca
