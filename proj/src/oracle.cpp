#include "qca/oracle.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace qca {

namespace {

// Dense density matrix over an ordered list of active sites (site 0 is the
// most significant bit of the row/column index).
class DenseSystem {
 public:
  explicit DenseSystem(int site_limit) : limit_(site_limit) {
    rho_ = Tensor({1, 1});
    rho_.data[0] = 1.0;
  }

  int active() const { return static_cast<int>(ids_.size()); }

  void attach_vacuum(int id) { attach_matrix(id, Tensor::ketbra(0, 0)); }

  void attach_matrix(int id, const Tensor& m) {
    const int new_sites = m.shape[0] == 2 ? 1 : count_bits(m.shape[0]);
    if (active() + new_sites > limit_)
      throw std::length_error("dense oracle: active window would exceed " +
                              std::to_string(limit_) + " sites");
    rho_ = kron(rho_, m);
    for (int i = 0; i < new_sites; ++i) ids_.push_back(id + i);
  }

  /// Apply the 8x8 gate with axes (a, b, c) at the sites with those ids.
  void apply_gate(const Tensor& g8, int id_a, int id_b, int id_c) {
    std::array<int, 3> pos = {position(id_a), position(id_b), position(id_c)};
    std::array<int, 3> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    // Reorder the gate's axes to match ascending site positions.
    std::vector<std::size_t> axis_perm(3);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        if (pos[l] == sorted[k]) axis_perm[k] = l;
    Tensor g = reshape(g8, {2, 2, 2, 2, 2, 2});
    std::vector<std::size_t> perm6;
    for (auto a : axis_perm) perm6.push_back(a);
    for (auto a : axis_perm) perm6.push_back(a + 3);
    g = reshape(permute(g, perm6), {8, 8});

    const int n = active();
    const std::size_t dim = std::size_t(1) << n;
    // Group the row axes around the three gate sites and bring them to the
    // front with one rank-8 permute, then one GEMM from the left.
    const std::size_t g0 = std::size_t(1) << sorted[0];
    const std::size_t g1 = std::size_t(1) << (sorted[1] - sorted[0] - 1);
    const std::size_t g2 = std::size_t(1) << (sorted[2] - sorted[1] - 1);
    const std::size_t g3 = dim >> (sorted[2] + 1);

    Tensor view = reshape(rho_, {g0, 2, g1, 2, g2, 2, g3, dim});
    view = permute(view, {1, 3, 5, 0, 2, 4, 6, 7});
    view = reshape(std::move(view), {8, dim / 8 * dim});
    view = matmul(g, view);
    view = reshape(std::move(view), {2, 2, 2, g0, g1, g2, g3, dim});
    view = permute(view, {3, 0, 4, 1, 5, 2, 6, 7});
    rho_ = reshape(std::move(view), {dim, dim});

    // Right side: rho <- rho g^dagger, acting on the column axes.
    Tensor viewc = reshape(rho_, {dim, g0, 2, g1, 2, g2, 2, g3});
    viewc = permute(viewc, {0, 1, 3, 5, 7, 2, 4, 6});
    viewc = reshape(std::move(viewc), {dim * (dim / 8), 8});
    Tensor out = matmul(viewc, dagger(g));
    out = reshape(std::move(out), {dim, g0, g1, g2, g3, 2, 2, 2});
    out = permute(out, {0, 1, 5, 2, 6, 3, 7, 4});
    rho_ = reshape(std::move(out), {dim, dim});
  }

  void trace_out(int id) {
    const int p = position(id);
    const int n = active();
    const std::size_t dim = std::size_t(1) << n;
    const std::size_t g0 = std::size_t(1) << p;
    const std::size_t g1 = dim >> (p + 1);
    Tensor view = reshape(rho_, {g0, 2, g1, g0, 2, g1});
    Tensor traced({g0, g1, g0, g1});
    for (std::size_t a = 0; a < g0; ++a)
      for (std::size_t b = 0; b < g1; ++b)
        for (std::size_t c = 0; c < g0; ++c)
          for (std::size_t d = 0; d < g1; ++d) {
            cplx acc = 0;
            for (std::size_t s = 0; s < 2; ++s)
              acc += view.data[((((a * 2 + s) * g1 + b) * g0 + c) * 2 + s) * g1 + d];
            traced.data[((a * g1 + b) * g0 + c) * g1 + d] = acc;
          }
    rho_ = reshape(std::move(traced), {dim / 2, dim / 2});
    ids_.erase(ids_.begin() + p);
  }

  /// Permute the remaining sites into ascending id order and return rho.
  Tensor finalize() {
    const int n = active();
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ids_[a] < ids_[b]; });
    std::vector<std::size_t> shape(2 * n, 2), perm;
    for (std::size_t o : order) perm.push_back(o);
    for (std::size_t o : order) perm.push_back(o + n);
    const std::size_t dim = std::size_t(1) << n;
    Tensor out = permute(reshape(rho_, shape), perm);
    return reshape(std::move(out), {dim, dim});
  }

 private:
  int position(int id) const {
    for (int i = 0; i < active(); ++i)
      if (ids_[i] == id) return i;
    throw std::logic_error("dense oracle: site id not active");
  }

  static int count_bits(std::size_t dim) {
    int n = 0;
    while (dim > 1) {
      dim >>= 1;
      ++n;
    }
    return n;
  }

  int limit_;
  Tensor rho_;
  std::vector<int> ids_;
};

}  // namespace

DenseRowState dense_seed_state() {
  DenseRowState s;
  s.matrix = Tensor::ketbra(1, 1);
  return s;
}

DenseRowState dense_vacuum_state() {
  DenseRowState s;
  s.matrix = Tensor::ketbra(0, 0);
  return s;
}

DenseRowState dense_step(const DenseRowState& s, const GateSpec& gate,
                         const StepScheme& scheme, int site_limit) {
  return dense_step_ordered(s, gate, scheme, scheme.dense_order(scheme.target_count(s.length)),
                            site_limit);
}

DenseRowState dense_step_ordered(const DenseRowState& s, const GateSpec& gate,
                                 const StepScheme& scheme, const std::vector<int>& order,
                                 int site_limit) {
  const int L = s.length;
  const auto [pl, pr] = scheme.pads();
  const int m = L + pl + pr;             // padded control row
  const int n = scheme.target_count(L);  // targets; controls of target j are (j, j+1)

  DenseSystem sys(site_limit);
  for (int a = 0; a < pl; ++a) sys.attach_vacuum(a);
  sys.attach_matrix(pl, s.matrix);  // control ids pl..pl+L-1
  for (int a = 0; a < pr; ++a) sys.attach_vacuum(pl + L + a);

  // Remaining-gate counts per control site; target ids start at m.
  std::vector<int> uses(m, 0);
  for (int j = 0; j < n; ++j) {
    ++uses[j];
    ++uses[j + 1];
  }
  for (int j : order) {
    sys.attach_vacuum(m + j);
    sys.apply_gate(gate.unitary, j, j + 1, m + j);
    for (int c : {j, j + 1}) {
      if (--uses[c] == 0) sys.trace_out(c);
    }
  }

  DenseRowState out;
  out.matrix = sys.finalize();
  out.time = s.time + 1;
  out.left_offset = s.left_offset - 1;
  out.length = n;
  return out;
}

double dense_total_occupation(const DenseRowState& s) {
  double total = 0;
  const std::size_t dim = s.matrix.shape[0];
  for (std::size_t r = 0; r < dim; ++r) {
    int bits = 0;
    for (std::size_t x = r; x; x >>= 1) bits += static_cast<int>(x & 1);
    total += bits * s.matrix.data[r * dim + r].real();
  }
  return total;
}

std::vector<double> dense_site_occupations(const DenseRowState& s) {
  const std::size_t dim = s.matrix.shape[0];
  std::vector<double> occ(s.length, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    const double p = s.matrix.data[r * dim + r].real();
    for (int k = 0; k < s.length; ++k)
      if (r >> (s.length - 1 - k) & 1) occ[k] += p;
  }
  return occ;
}

cplx dense_trace(const DenseRowState& s) {
  cplx tr = 0;
  const std::size_t dim = s.matrix.shape[0];
  for (std::size_t r = 0; r < dim; ++r) tr += s.matrix.data[r * dim + r];
  return tr;
}

std::vector<double> dense_occupation_series(double gamma, double omega,
                                            const StepScheme& scheme, int t_max,
                                            GeneratorOrder order, int site_limit) {
  const auto gate = cached_gate(gamma, omega, order);
  DenseRowState s = dense_seed_state();
  std::vector<double> series;
  for (int t = 1; t <= t_max; ++t) {
    s = dense_step(s, *gate, scheme, site_limit);
    series.push_back(dense_total_occupation(s));
  }
  return series;
}

}  // namespace qca
