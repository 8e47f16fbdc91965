#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

namespace qca {

using cplx = std::complex<double>;

constexpr std::size_t kUnboundedRank = std::numeric_limits<std::size_t>::max();

/// Dense complex tensor with a fixed row-major linearization.
/// The last axis is fastest; serialized tensors are bit-stable across runs.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<cplx> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape_in);

  static Tensor zeros(std::vector<std::size_t> shape_in);
  static Tensor identity(std::size_t n);
  /// 2x2 operator |out><in|.
  static Tensor ketbra(int out, int in);

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const { return data.size(); }
  std::size_t extent(std::size_t axis) const { return shape.at(axis); }

  cplx& at(std::initializer_list<std::size_t> idx);
  cplx at(std::initializer_list<std::size_t> idx) const;

  Tensor& operator*=(cplx factor);
  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);

  double norm() const;        // Frobenius
  double max_abs() const;
};

Tensor operator*(cplx factor, Tensor t);
Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);

Tensor conj(const Tensor& t);
Tensor permute(const Tensor& t, const std::vector<std::size_t>& axes);
Tensor reshape(Tensor t, std::vector<std::size_t> new_shape);
/// Kronecker product of square matrices, row-major index fusing (a-major).
Tensor kron(const Tensor& a, const Tensor& b);

/// Pairwise contraction. Result carries the unpaired axes of `a` followed by
/// the unpaired axes of `b`, in their original order.
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& axis_pairs);

struct SvdResult {
  Tensor left;                          // (kept left axes..., rank)
  std::vector<double> singular_values;  // non-increasing, >= 0
  Tensor right;                         // (rank, right axes...)
  double discarded_weight = 0.0;        // sum of dropped s^2 / sum of all s^2
  bool zero_input = false;              // all-zero tensor decomposed as flagged rank-1 zero
};

/// Split `t` across the bipartition (left_axes | remaining axes) by SVD.
/// Singular values whose relative squared weight falls below `cutoff` are
/// dropped, as are values at the numerical-noise floor; at most `max_rank`
/// are kept. left * diag(s) * right reconstructs `t` within discarded_weight.
SvdResult svd_split(const Tensor& t, const std::vector<std::size_t>& left_axes,
                    std::size_t max_rank = kUnboundedRank, double cutoff = 0.0);

/// exp(scale * h) for Hermitian h (as a square matrix), via eigendecomposition.
Tensor hermitian_exp(const Tensor& h, cplx scale);

// Matrix views: rank-2 helpers used across the tensor-network modules.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor dagger(const Tensor& m);

/// Economy QR of a rank-2 tensor: m = Q * R with Q column-orthonormal.
std::pair<Tensor, Tensor> qr(const Tensor& m);
/// Economy LQ of a rank-2 tensor: m = L * Q with Q row-orthonormal.
std::pair<Tensor, Tensor> lq(const Tensor& m);

/// Eigendecomposition of a Hermitian rank-2 tensor; returns ascending
/// eigenvalues and the tensor V whose columns are eigenvectors.
std::pair<std::vector<double>, Tensor> eigh(const Tensor& h);

}  // namespace qca
