#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "qca/mps_mpo.hpp"
#include "qca/tensor.hpp"
#include "test_helpers.hpp"

using namespace qca;
using qca::testing::max_abs_diff;
using qca::testing::mpo_to_dense;
using qca::testing::mps_to_dense;
using qca::testing::random_mps;
using qca::testing::random_tensor;

namespace {

Mpo random_mpo(const std::vector<std::size_t>& bonds, std::mt19937_64& gen) {
  // bonds has length n+1 with bonds.front() == bonds.back() == 1.
  Mpo m;
  for (std::size_t i = 0; i + 1 < bonds.size(); ++i)
    m.sites.push_back(random_tensor({bonds[i], 2, 2, bonds[i + 1]}, gen));
  return m;
}

Tensor gaussian_inverse(const Tensor& m) {
  const std::size_t n = m.shape[0];
  Tensor a = m;
  Tensor inv = Tensor::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a.data[r * n + col]) > std::abs(a.data[piv * n + col])) piv = r;
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a.data[col * n + c], a.data[piv * n + c]);
      std::swap(inv.data[col * n + c], inv.data[piv * n + c]);
    }
    const cplx p = a.data[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a.data[col * n + c] /= p;
      inv.data[col * n + c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a.data[r * n + col];
      if (f == cplx(0)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a.data[r * n + c] -= f * a.data[col * n + c];
        inv.data[r * n + c] -= f * inv.data[col * n + c];
      }
    }
  }
  return inv;
}

}  // namespace

TEST_CASE("mpo_trace: pure single-site projector") {
  Mpo m = product_mpo(1, Tensor::ketbra(1, 1));
  CHECK(std::abs(mpo_trace(m) - cplx(1)) < 1e-15);
}

TEST_CASE("mpo_trace: maximally mixed product state is normalized") {
  Tensor half = Tensor::identity(2);
  half *= 0.5;
  Mpo m = product_mpo(5, half);
  CHECK(std::abs(mpo_trace(m) - cplx(1)) < 1e-14);
}

TEST_CASE("mpo_trace: random 4-site MPO matches the dense oracle") {
  std::mt19937_64 gen(101);
  Mpo m = random_mpo({1, 3, 4, 2, 1}, gen);
  Tensor dense = mpo_to_dense(m);
  cplx tr = 0;
  for (std::size_t i = 0; i < 16; ++i) tr += dense.data[i * 16 + i];
  CHECK(std::abs(mpo_trace(m) - tr) < 1e-12);
}

TEST_CASE("mpo_trace: invariant under bond gauge transformations") {
  std::mt19937_64 gen(103);
  Mpo m = random_mpo({1, 3, 3, 1}, gen);
  const cplx before = mpo_trace(m);

  Tensor x = random_tensor({3, 3}, gen) + cplx(2) * Tensor::identity(3);
  Tensor xinv = gaussian_inverse(x);
  REQUIRE(max_abs_diff(matmul(x, xinv), Tensor::identity(3)) < 1e-11);
  m.sites[0] = contract(m.sites[0], x, {{3, 0}});
  m.sites[1] = permute(contract(xinv, m.sites[1], {{1, 0}}), {0, 1, 2, 3});
  const cplx after = mpo_trace(m);
  CHECK(std::abs(before - after) < 1e-11);
}

TEST_CASE("mpo_local_expectation: examples and dense oracle") {
  const Tensor num = Tensor::ketbra(1, 1);
  CHECK(std::abs(mpo_local_expectation(product_mpo(1, Tensor::ketbra(1, 1)), 0, num) -
                 cplx(1)) < 1e-15);

  Mpo vacuum = product_mpo(4, Tensor::ketbra(0, 0));
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(mpo_local_expectation(vacuum, k, num)) < 1e-15);

  std::mt19937_64 gen(107);
  Mpo m = random_mpo({1, 2, 4, 3, 1}, gen);
  Tensor sz({2, 2});
  sz.data = {cplx(-1), cplx(0), cplx(0), cplx(1)};
  Tensor dense = mpo_to_dense(m);
  // Oracle: Tr(op_2 rho) over dense indices.
  cplx expected = 0;
  for (std::size_t o = 0; o < 16; ++o)
    for (std::size_t i = 0; i < 16; ++i) {
      // site 2 is the second-to-last bit
      const std::size_t o2 = (o >> 1) & 1, i2 = (i >> 1) & 1;
      if ((o & ~std::size_t(2)) != (i & ~std::size_t(2))) continue;
      expected += sz.data[i2 * 2 + o2] * dense.data[o * 16 + i];
    }
  CHECK(std::abs(mpo_local_expectation(m, 2, sz) - expected) < 1e-12);
  CHECK_THROWS_AS(mpo_local_expectation(m, 7, sz), std::invalid_argument);
}

TEST_CASE("doubled space: basis convention and round trip") {
  Mpo m = product_mpo(1, Tensor::ketbra(1, 0));
  Mps d = mpo_to_doubled_mps(m);
  REQUIRE(d.sites[0].shape == std::vector<std::size_t>{1, 4, 1});
  CHECK(std::abs(d.sites[0].data[2] - cplx(1)) < 1e-15);  // index 2*1+0

  std::mt19937_64 gen(109);
  Mpo r = random_mpo({1, 3, 2, 1}, gen);
  Mpo back = mps_to_mpo(mpo_to_doubled_mps(r));
  for (int i = 0; i < r.length(); ++i) CHECK(max_abs_diff(r.sites[i], back.sites[i]) == 0.0);

  Mpo idchain = product_mpo(3, Tensor::identity(2));
  Mpo idback = mps_to_mpo(mpo_to_doubled_mps(idchain));
  for (int i = 0; i < 3; ++i) CHECK(max_abs_diff(idchain.sites[i], idback.sites[i]) == 0.0);

  Mps wrong = random_mps(2, {1, 2, 1}, gen);
  CHECK_THROWS_AS(mps_to_mpo(wrong), std::invalid_argument);
}

TEST_CASE("doubled space: norm equals the Frobenius norm of the operator") {
  std::mt19937_64 gen(113);
  Mpo m = random_mpo({1, 4, 3, 1}, gen);
  Mps d = mpo_to_doubled_mps(m);
  Tensor dense = mpo_to_dense(m);
  double frob2 = 0;
  for (const auto& v : dense.data) frob2 += std::norm(v);
  CHECK(std::abs(mps_overlap(d, d).real() - frob2) < 1e-12 * frob2);
}

TEST_CASE("doubled space: Frobenius inner product is preserved") {
  std::mt19937_64 gen(127);
  Mpo a = random_mpo({1, 2, 3, 1}, gen);
  Mpo b = random_mpo({1, 4, 2, 1}, gen);
  const cplx lhs = mps_overlap(mpo_to_doubled_mps(a), mpo_to_doubled_mps(b));
  Tensor da = mpo_to_dense(a), db = mpo_to_dense(b);
  cplx rhs = 0;  // Tr(a^dag b)
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) rhs += std::conj(da.data[i * 8 + j]) * db.data[i * 8 + j];
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("mps_overlap: product states") {
  Mps up;
  up.sites.push_back([] {
    Tensor t({1, 2, 1});
    t.data = {cplx(1), cplx(0)};
    return t;
  }());
  Mps down;
  down.sites.push_back([] {
    Tensor t({1, 2, 1});
    t.data = {cplx(0), cplx(1)};
    return t;
  }());
  CHECK(std::abs(mps_overlap(up, up) - cplx(1)) < 1e-15);
  CHECK(std::abs(mps_overlap(up, down)) < 1e-15);
}

TEST_CASE("mps_overlap: random 5-site pair matches the dense oracle") {
  std::mt19937_64 gen(131);
  Mps a = random_mps(2, {1, 2, 4, 3, 2, 1}, gen);
  Mps b = random_mps(2, {1, 3, 2, 4, 2, 1}, gen);
  Tensor va = mps_to_dense(a), vb = mps_to_dense(b);
  cplx expected = 0;
  for (std::size_t i = 0; i < va.size(); ++i) expected += std::conj(va.data[i]) * vb.data[i];
  CHECK(std::abs(mps_overlap(a, b) - expected) < 1e-12);

  Mps c = random_mps(2, {1, 2, 1}, gen);
  CHECK_THROWS_AS(mps_overlap(a, c), std::invalid_argument);
}

TEST_CASE("canonicalized: preserves the norm and sets isometries") {
  std::mt19937_64 gen(137);
  Mps s = random_mps(3, {1, 4, 5, 3, 1}, gen);
  const double norm_before = mps_norm(s);
  for (int center = 0; center < s.length(); ++center) {
    Mps c = canonicalized(s, center);
    CHECK(std::abs(mps_norm(c) - norm_before) < 1e-10 * norm_before);
    REQUIRE(c.center == center);
    // left isometries
    for (int i = 0; i < center; ++i) {
      const Tensor& t = c.sites[i];
      Tensor g = contract(conj(t), t, {{0, 0}, {1, 1}});
      CHECK(max_abs_diff(g, Tensor::identity(t.shape[2])) < 1e-10);
    }
    for (int i = center + 1; i < c.length(); ++i) {
      const Tensor& t = c.sites[i];
      Tensor g = contract(t, conj(t), {{1, 1}, {2, 2}});
      CHECK(max_abs_diff(g, Tensor::identity(t.shape[0])) < 1e-10);
    }
  }
}

TEST_CASE("mps_svd_truncate: product state passes through unchanged") {
  std::mt19937_64 gen(139);
  Mps s = random_mps(2, {1, 1, 1, 1}, gen);
  CompressionPolicy policy;
  policy.chi = 1;
  auto [out, discarded] = mps_svd_truncate(s, policy);
  CHECK(discarded == doctest::Approx(0.0));
  CHECK(std::abs(std::abs(mps_overlap(out, s)) - mps_norm(s) * mps_norm(out)) < 1e-12);
}

TEST_CASE("mps_svd_truncate: symmetric two-term state loses half its weight at chi=1") {
  // (|00> + |11>)/sqrt(2) as a bond-2 MPS.
  const double c = std::pow(2.0, -0.25);
  Tensor a1({1, 2, 2}), a2({2, 2, 1});
  a1.at({0, 0, 0}) = c;
  a1.at({0, 1, 1}) = c;
  a2.at({0, 0, 0}) = c;
  a2.at({1, 1, 0}) = c;
  Mps ghz;
  ghz.sites = {a1, a2};
  REQUIRE(mps_norm(ghz) == doctest::Approx(1.0));

  CompressionPolicy policy;
  policy.chi = 1;
  auto [out, discarded] = mps_svd_truncate(ghz, policy);
  CHECK(out.max_bond() == 1);
  CHECK(discarded == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mps_svd_truncate: matches the dense sequential-truncation oracle") {
  std::mt19937_64 gen(149);
  const int n = 6;
  Mps s = random_mps(2, {1, 8, 8, 8, 8, 8, 1}, gen);
  CompressionPolicy policy;
  policy.chi = 4;
  policy.svd_cutoff = 0;
  auto [out, discarded] = mps_svd_truncate(s, policy);
  CHECK(out.max_bond() <= 4);

  // Dense oracle: right-to-left sequential Schmidt truncation of the state
  // vector, mirroring the sweep's bond order.
  Tensor psi = mps_to_dense(s);
  Tensor current = psi;
  std::vector<Tensor> kept_sites(n);
  std::size_t cols = 1;  // bond to the right of the site being split off
  for (int i = n - 1; i > 0; --i) {
    current = reshape(current, {current.size() / (2 * cols), 2 * cols});
    SvdResult r = svd_split(current, {0}, 4, 0.0);
    const std::size_t k = r.singular_values.size();
    kept_sites[i] = reshape(r.right, {k, 2, cols});
    Tensor carry = r.left;
    for (std::size_t row = 0; row < carry.shape[0]; ++row)
      for (std::size_t col = 0; col < k; ++col)
        carry.data[row * k + col] *= r.singular_values[col];
    current = carry;
    cols = k;
  }
  // fidelity per the oracle
  Tensor approx = current;  // (2, k1)
  for (int i = 1; i < n; ++i) {
    const std::size_t last = approx.rank() - 1;
    approx = contract(approx, kept_sites[i], {{last, 0}});
  }
  approx = reshape(approx, {psi.size()});
  cplx ip = 0;
  double nn = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    ip += std::conj(approx.data[i]) * psi.data[i];
    nn += std::norm(approx.data[i]);
  }
  const double fid_oracle = std::abs(ip) / (std::sqrt(nn) * psi.norm());

  Tensor vout = mps_to_dense(out);
  cplx ip2 = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) ip2 += std::conj(vout.data[i]) * psi.data[i];
  const double fid = std::abs(ip2) / (vout.norm() * psi.norm());
  CHECK(fid == doctest::Approx(fid_oracle).epsilon(1e-10));
}

TEST_CASE("mps_add: inner products are additive") {
  std::mt19937_64 gen(151);
  Mps a = random_mps(4, {1, 3, 2, 1}, gen);
  Mps b = random_mps(4, {1, 2, 2, 1}, gen);
  Mps c = random_mps(4, {1, 3, 3, 1}, gen);
  Mps sum = mps_add(a, b);
  const cplx lhs = mps_overlap(sum, c);
  const cplx rhs = mps_overlap(a, c) + mps_overlap(b, c);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("doubled_dagger and doubled observables") {
  std::mt19937_64 gen(157);
  Mpo m = random_mpo({1, 3, 2, 1}, gen);
  Mps d = mpo_to_doubled_mps(m);

  CHECK(std::abs(doubled_trace(d) - mpo_trace(m)) < 1e-12);

  const Tensor num = Tensor::ketbra(1, 1);
  cplx total = 0;
  for (int k = 0; k < 3; ++k) {
    const cplx via_mpo = mpo_local_expectation(m, k, num);
    CHECK(std::abs(doubled_local_expectation(d, k, num) - via_mpo) < 1e-12);
    total += via_mpo;
  }
  CHECK(std::abs(doubled_total_occupation(d) - total) < 1e-12);

  // the adjoint agrees with the dense adjoint, via both code paths
  Tensor dense_dag = dagger(mpo_to_dense(m));
  CHECK(max_abs_diff(mpo_to_dense(mpo_dagger(m)), dense_dag) < 1e-13);
  CHECK(max_abs_diff(mpo_to_dense(mps_to_mpo(doubled_dagger(d))), dense_dag) < 1e-13);
}
