#include "qca/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lapack_wrap.hpp"

namespace qca {

namespace {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw std::invalid_argument("tensor extents must be >= 1");
    n *= e;
  }
  return n;
}

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
  return strides;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape_in)
    : shape(std::move(shape_in)), data(shape_size(shape)) {}

Tensor Tensor::zeros(std::vector<std::size_t> shape_in) { return Tensor(std::move(shape_in)); }

Tensor Tensor::identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
  return t;
}

Tensor Tensor::ketbra(int out, int in) {
  Tensor t({2, 2});
  t.data[static_cast<std::size_t>(out) * 2 + in] = 1.0;
  return t;
}

cplx& Tensor::at(std::initializer_list<std::size_t> idx) {
  if (idx.size() != shape.size()) throw std::invalid_argument("index rank mismatch");
  std::size_t lin = 0, axis = 0;
  for (std::size_t i : idx) {
    if (i >= shape[axis]) throw std::out_of_range("tensor index out of range");
    lin = lin * shape[axis] + i;
    ++axis;
  }
  return data[lin];
}

cplx Tensor::at(std::initializer_list<std::size_t> idx) const {
  return const_cast<Tensor*>(this)->at(idx);
}

Tensor& Tensor::operator*=(cplx factor) {
  for (auto& v : data) v *= factor;
  return *this;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (shape != other.shape) throw std::invalid_argument("tensor shape mismatch in +=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (shape != other.shape) throw std::invalid_argument("tensor shape mismatch in -=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= other.data[i];
  return *this;
}

double Tensor::norm() const {
  double acc = 0;
  for (const auto& v : data) acc += std::norm(v);
  return std::sqrt(acc);
}

double Tensor::max_abs() const {
  double m = 0;
  for (const auto& v : data) m = std::max(m, std::abs(v));
  return m;
}

Tensor operator*(cplx factor, Tensor t) {
  t *= factor;
  return t;
}

Tensor operator+(Tensor a, const Tensor& b) {
  a += b;
  return a;
}

Tensor operator-(Tensor a, const Tensor& b) {
  a -= b;
  return a;
}

Tensor conj(const Tensor& t) {
  Tensor out = t;
  for (auto& v : out.data) v = std::conj(v);
  return out;
}

Tensor permute(const Tensor& t, const std::vector<std::size_t>& axes) {
  if (axes.size() != t.rank()) throw std::invalid_argument("permute: axis count mismatch");
  std::vector<bool> seen(t.rank(), false);
  std::vector<std::size_t> out_shape(t.rank());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] >= t.rank() || seen[axes[i]]) throw std::invalid_argument("permute: bad axis list");
    seen[axes[i]] = true;
    out_shape[i] = t.shape[axes[i]];
  }
  Tensor out(out_shape);
  if (t.rank() == 0) {
    out.data = t.data;
    return out;
  }
  const auto in_strides = row_major_strides(t.shape);
  std::vector<std::size_t> gather(t.rank());
  for (std::size_t i = 0; i < axes.size(); ++i) gather[i] = in_strides[axes[i]];

  std::vector<std::size_t> idx(t.rank(), 0);
  std::size_t src = 0;
  const std::size_t n = out.size();
  for (std::size_t lin = 0; lin < n; ++lin) {
    out.data[lin] = t.data[src];
    for (std::size_t a = t.rank(); a-- > 0;) {
      if (++idx[a] < out_shape[a]) {
        src += gather[a];
        break;
      }
      src -= gather[a] * (out_shape[a] - 1);
      idx[a] = 0;
    }
  }
  return out;
}

Tensor reshape(Tensor t, std::vector<std::size_t> new_shape) {
  if (shape_size(new_shape) != t.size()) throw std::invalid_argument("reshape: size mismatch");
  t.shape = std::move(new_shape);
  return t;
}

Tensor kron(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw std::invalid_argument("kron expects matrices");
  const std::size_t am = a.shape[0], an = a.shape[1], bm = b.shape[0], bn = b.shape[1];
  Tensor out({am * bm, an * bn});
  for (std::size_t i = 0; i < am; ++i)
    for (std::size_t j = 0; j < an; ++j) {
      const cplx av = a.data[i * an + j];
      if (av == cplx(0)) continue;
      for (std::size_t k = 0; k < bm; ++k)
        for (std::size_t l = 0; l < bn; ++l)
          out.data[(i * bm + k) * (an * bn) + (j * bn + l)] = av * b.data[k * bn + l];
    }
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& axis_pairs) {
  std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
  for (const auto& [ia, ib] : axis_pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw std::invalid_argument("contract: axis out of range");
    if (a_used[ia] || b_used[ib]) throw std::invalid_argument("contract: axis paired twice");
    if (a.shape[ia] != b.shape[ib])
      throw std::invalid_argument("contract: paired extents differ (" +
                                  std::to_string(a.shape[ia]) + " vs " +
                                  std::to_string(b.shape[ib]) + ")");
    a_used[ia] = true;
    b_used[ib] = true;
  }

  std::vector<std::size_t> a_perm, b_perm, out_shape;
  std::size_t m = 1, n = 1, k = 1;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!a_used[i]) {
      a_perm.push_back(i);
      out_shape.push_back(a.shape[i]);
      m *= a.shape[i];
    }
  for (const auto& [ia, ib] : axis_pairs) {
    a_perm.push_back(ia);
    k *= a.shape[ia];
  }
  for (const auto& [ia, ib] : axis_pairs) b_perm.push_back(ib);
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!b_used[i]) {
      b_perm.push_back(i);
      out_shape.push_back(b.shape[i]);
      n *= b.shape[i];
    }

  const Tensor a2 = permute(a, a_perm);
  const Tensor b2 = permute(b, b_perm);
  Tensor out(out_shape);
  la::gemm('N', 'N', m, n, k, cplx(1), a2.data.data(), b2.data.data(), cplx(0),
           out.data.data());
  return out;
}

SvdResult svd_split(const Tensor& t, const std::vector<std::size_t>& left_axes,
                    std::size_t max_rank, double cutoff) {
  if (left_axes.empty() || left_axes.size() >= t.rank())
    throw std::invalid_argument("svd_split: left axes must be a proper non-empty subset");
  std::vector<bool> is_left(t.rank(), false);
  for (std::size_t ax : left_axes) {
    if (ax >= t.rank() || is_left[ax]) throw std::invalid_argument("svd_split: bad left axes");
    is_left[ax] = true;
  }

  std::vector<std::size_t> perm = left_axes;
  std::vector<std::size_t> left_shape, right_shape;
  std::size_t m = 1, n = 1;
  for (std::size_t ax : left_axes) {
    left_shape.push_back(t.shape[ax]);
    m *= t.shape[ax];
  }
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (!is_left[i]) {
      perm.push_back(i);
      right_shape.push_back(t.shape[i]);
      n *= t.shape[i];
    }
  const Tensor flat = permute(t, perm);

  SvdResult res;
  if (flat.max_abs() == 0.0) {
    // The absorbing vacuum produces legitimately zero blocks; decompose as a
    // flagged rank-1 zero instead of erroring.
    left_shape.push_back(1);
    right_shape.insert(right_shape.begin(), 1);
    res.left = Tensor::zeros(left_shape);
    res.right = Tensor::zeros(right_shape);
    res.singular_values = {0.0};
    res.discarded_weight = 0.0;
    res.zero_input = true;
    return res;
  }

  std::vector<cplx> u, vh;
  std::vector<double> s;
  la::svd(m, n, flat.data.data(), u, s, vh);
  const std::size_t r_full = s.size();

  double total = 0;
  for (double v : s) total += v * v;
  // Values at the numerical-noise floor never count as rank.
  const double floor = s[0] * static_cast<double>(std::max(m, n)) * 2.3e-16;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < r_full; ++i) {
    if (i >= max_rank) break;
    if (s[i] <= floor) break;
    if (cutoff > 0 && (s[i] * s[i]) / total < cutoff) break;
    ++keep;
  }
  keep = std::max<std::size_t>(keep, 1);

  double dropped = 0;
  for (std::size_t i = keep; i < r_full; ++i) dropped += s[i] * s[i];
  res.discarded_weight = dropped / total;
  res.singular_values.assign(s.begin(), s.begin() + keep);

  left_shape.push_back(keep);
  res.left = Tensor(left_shape);
  for (std::size_t row = 0; row < m; ++row)
    std::copy(u.begin() + row * r_full, u.begin() + row * r_full + keep,
              res.left.data.begin() + row * keep);

  right_shape.insert(right_shape.begin(), keep);
  res.right = Tensor(right_shape);
  std::copy(vh.begin(), vh.begin() + keep * n, res.right.data.begin());
  return res;
}

Tensor hermitian_exp(const Tensor& h, cplx scale) {
  if (h.rank() != 2 || h.shape[0] != h.shape[1])
    throw std::invalid_argument("hermitian_exp expects a square matrix");
  const std::size_t n = h.shape[0];
  const double scale_ref = std::max(1.0, h.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx d = h.data[i * n + j] - std::conj(h.data[j * n + i]);
      if (std::abs(d) > 1e-12 * scale_ref)
        throw std::invalid_argument("hermitian_exp: input is not Hermitian within 1e-12");
    }

  std::vector<double> w;
  std::vector<cplx> rows;  // row j = conj(v_j)
  la::heig(n, h.data.data(), w, rows);

  // exp(scale h) = sum_j e^{scale w_j} v_j v_j^H = W^H diag(e^{scale w}) W
  // with W the row matrix returned by heig.
  std::vector<cplx> scaled(rows);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx f = std::exp(scale * w[j]);
    for (std::size_t c = 0; c < n; ++c) scaled[j * n + c] *= f;
  }
  Tensor out({n, n});
  la::gemm('C', 'N', n, n, n, cplx(1), rows.data(), scaled.data(), cplx(0), out.data.data());
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape[1] != b.shape[0])
    throw std::invalid_argument("matmul: incompatible matrices");
  Tensor out({a.shape[0], b.shape[1]});
  la::gemm('N', 'N', a.shape[0], b.shape[1], a.shape[1], cplx(1), a.data.data(),
           b.data.data(), cplx(0), out.data.data());
  return out;
}

Tensor dagger(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("dagger expects a matrix");
  Tensor out({m.shape[1], m.shape[0]});
  for (std::size_t i = 0; i < m.shape[0]; ++i)
    for (std::size_t j = 0; j < m.shape[1]; ++j)
      out.data[j * m.shape[0] + i] = std::conj(m.data[i * m.shape[1] + j]);
  return out;
}

std::pair<Tensor, Tensor> qr(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("qr expects a matrix");
  std::vector<cplx> q, r;
  la::qr(m.shape[0], m.shape[1], m.data.data(), q, r);
  const std::size_t k = std::min(m.shape[0], m.shape[1]);
  Tensor tq({m.shape[0], k}), tr({k, m.shape[1]});
  tq.data = std::move(q);
  tr.data = std::move(r);
  return {std::move(tq), std::move(tr)};
}

std::pair<Tensor, Tensor> lq(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("lq expects a matrix");
  std::vector<cplx> l, q;
  la::lq(m.shape[0], m.shape[1], m.data.data(), l, q);
  const std::size_t k = std::min(m.shape[0], m.shape[1]);
  Tensor tl({m.shape[0], k}), tq({k, m.shape[1]});
  tl.data = std::move(l);
  tq.data = std::move(q);
  return {std::move(tl), std::move(tq)};
}

std::pair<std::vector<double>, Tensor> eigh(const Tensor& h) {
  if (h.rank() != 2 || h.shape[0] != h.shape[1])
    throw std::invalid_argument("eigh expects a square matrix");
  std::vector<double> w;
  std::vector<cplx> rows;
  la::heig(h.shape[0], h.data.data(), w, rows);
  Tensor rowsT({h.shape[0], h.shape[0]});
  rowsT.data = std::move(rows);
  return {std::move(w), dagger(rowsT)};
}

}  // namespace qca
