#include "qca/gates.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace qca {

const PauliSet& PauliSet::get() {
  static const PauliSet set = [] {
    PauliSet p;
    p.sigma_plus = Tensor::ketbra(1, 0);
    p.sigma_minus = Tensor::ketbra(0, 1);
    p.sigma_y = cplx(0, -1) * Tensor::ketbra(1, 0) + cplx(0, 1) * Tensor::ketbra(0, 1);
    p.sigma_z = Tensor::ketbra(1, 1) - Tensor::ketbra(0, 0);
    p.number_op = Tensor::ketbra(1, 1);
    p.identity = Tensor::identity(2);
    return p;
  }();
  return set;
}

Tensor build_projector() {
  Tensor p = Tensor::identity(4);
  p.data[0] = 0.0;  // removes |00><00|
  return p;
}

Tensor build_entangler(double omega) {
  const PauliSet& s = PauliSet::get();
  Tensor h = kron(s.sigma_z, s.sigma_y) + kron(s.sigma_y, s.sigma_z);
  return hermitian_exp(h, cplx(0, -omega));
}

namespace {

std::vector<Tensor> split_unitary(const Tensor& unitary, bool target_last) {
  // Reshape the 8x8 matrix to (cl_o, cr_o, t_o, cl_i, cr_i, t_i) and group
  // the legs site by site along the requested order.
  Tensor t = reshape(unitary, {2, 2, 2, 2, 2, 2});
  t = target_last ? permute(t, {0, 3, 1, 4, 2, 5})   // (cl)(cr)(t)
                  : permute(t, {0, 3, 2, 5, 1, 4});  // (cl)(t)(cr)

  SvdResult s1 = svd_split(t, {0, 1});
  Tensor right1 = s1.right;
  for (std::size_t r = 0; r < s1.singular_values.size(); ++r) {
    const std::size_t block = right1.size() / s1.singular_values.size();
    for (std::size_t j = 0; j < block; ++j) right1.data[r * block + j] *= s1.singular_values[r];
  }
  SvdResult s2 = svd_split(right1, {0, 1, 2});
  Tensor right2 = s2.right;
  for (std::size_t r = 0; r < s2.singular_values.size(); ++r) {
    const std::size_t block = right2.size() / s2.singular_values.size();
    for (std::size_t j = 0; j < block; ++j) right2.data[r * block + j] *= s2.singular_values[r];
  }

  const std::size_t b1 = s1.singular_values.size();
  const std::size_t b2 = s2.singular_values.size();
  std::vector<Tensor> sites(3);
  sites[0] = reshape(s1.left, {1, 2, 2, b1});
  sites[1] = s2.left;  // (b1, o, i, b2)
  sites[2] = reshape(right2, {b2, 2, 2, 1});
  return sites;
}

}  // namespace

GateSpec build_gate(double gamma, double omega, GeneratorOrder order) {
  const PauliSet& s = PauliSet::get();
  const Tensor p = build_projector();
  const Tensor u = build_entangler(omega);
  const Tensor controls = (order == GeneratorOrder::up) ? matmul(u, p) : matmul(p, u);
  Tensor raising = kron(controls, s.sigma_plus);
  Tensor generator = raising + dagger(raising);

  GateSpec g;
  g.gamma = gamma;
  g.omega = omega;
  g.order = order;
  g.unitary = hermitian_exp(generator, cplx(0, -gamma));
  g.mpo_form = gate_to_mpo(g);
  return g;
}

std::vector<Tensor> gate_to_mpo(const GateSpec& g) { return split_unitary(g.unitary, true); }

std::vector<Tensor> gate_chain_mpo(const GateSpec& g) { return split_unitary(g.unitary, false); }

std::shared_ptr<const GateSpec> cached_gate(double gamma, double omega, GeneratorOrder order) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, int>, std::shared_ptr<const GateSpec>> cache;
  const auto key = std::make_tuple(gamma, omega, static_cast<int>(order));
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto spec = std::make_shared<const GateSpec>(build_gate(gamma, omega, order));
  cache.emplace(key, spec);
  return spec;
}

}  // namespace qca
