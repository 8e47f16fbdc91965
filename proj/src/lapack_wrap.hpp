#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Thin row-major adapters over the Fortran BLAS/LAPACK kernels the tensor
// module is built on. All matrices here are row-major unless stated.

namespace qca::la {

using cplx = std::complex<double>;

/// C (m x n) = opA(A) * opB(B); ops are 'N', 'T' or 'C' in row-major semantics.
void gemm(char op_a, char op_b, std::size_t m, std::size_t n, std::size_t k,
          cplx alpha, const cplx* a, const cplx* b, cplx beta, cplx* c);

/// Thin SVD a = u * diag(s) * vh with r = min(m, n).
/// u is (m x r), s length r non-increasing, vh is (r x n).
void svd(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& u,
         std::vector<double>& s, std::vector<cplx>& vh);

/// Hermitian eigendecomposition; on return `rows_w` holds, row by row, the
/// conjugated eigenvectors (row j = conj(v_j)) and `w` the ascending
/// eigenvalues, so that h = sum_j w[j] * conj(rows_w[j])^T rows_w[j].
void heig(std::size_t n, const cplx* h, std::vector<double>& w, std::vector<cplx>& rows_w);

/// Economy QR: a (m x n) = q (m x k) * r (k x n), k = min(m, n).
void qr(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& q, std::vector<cplx>& r);

/// Economy LQ: a (m x n) = l (m x k) * q (k x n), k = min(m, n).
void lq(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& l, std::vector<cplx>& q);

}  // namespace qca::la
