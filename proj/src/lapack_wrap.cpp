#include "lapack_wrap.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

extern "C" {
void zgemm_(const char*, const char*, const int*, const int*, const int*,
            const qca::la::cplx*, const qca::la::cplx*, const int*, const qca::la::cplx*,
            const int*, const qca::la::cplx*, qca::la::cplx*, const int*);
void zgesdd_(const char*, const int*, const int*, qca::la::cplx*, const int*, double*,
             qca::la::cplx*, const int*, qca::la::cplx*, const int*, qca::la::cplx*,
             const int*, double*, int*, int*);
void zgesvd_(const char*, const char*, const int*, const int*, qca::la::cplx*, const int*,
             double*, qca::la::cplx*, const int*, qca::la::cplx*, const int*,
             qca::la::cplx*, const int*, double*, int*);
void zheevd_(const char*, const char*, const int*, qca::la::cplx*, const int*, double*,
             qca::la::cplx*, const int*, double*, const int*, int*, const int*, int*);
void zgeqrf_(const int*, const int*, qca::la::cplx*, const int*, qca::la::cplx*,
             qca::la::cplx*, const int*, int*);
void zungqr_(const int*, const int*, const int*, qca::la::cplx*, const int*,
             const qca::la::cplx*, qca::la::cplx*, const int*, int*);
void zgelqf_(const int*, const int*, qca::la::cplx*, const int*, qca::la::cplx*,
             qca::la::cplx*, const int*, int*);
void zunglq_(const int*, const int*, const int*, qca::la::cplx*, const int*,
             const qca::la::cplx*, qca::la::cplx*, const int*, int*);
}

namespace qca::la {

namespace {

[[noreturn]] void fail(const std::string& what, int info) {
  throw std::runtime_error(what + " failed, info = " + std::to_string(info));
}

int as_int(std::size_t v) { return static_cast<int>(v); }

}  // namespace

void gemm(char op_a, char op_b, std::size_t m, std::size_t n, std::size_t k,
          cplx alpha, const cplx* a, const cplx* b, cplx beta, cplx* c) {
  // A row-major buffer viewed column-major is the transpose, so the product
  // is computed as C^T = opB(B)^T opA(A)^T with the same op letters.
  const int mi = as_int(m), ni = as_int(n), ki = as_int(k);
  const int lda = (op_a == 'N') ? ki : mi;
  const int ldb = (op_b == 'N') ? ni : ki;
  zgemm_(&op_b, &op_a, &ni, &mi, &ki, &alpha, b, &ldb, a, &lda, &beta, c, &ni);
}

void svd(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& u,
         std::vector<double>& s, std::vector<cplx>& vh) {
  // The row-major (m x n) buffer is a column-major (n x m) matrix A^T.
  // With A^T = U' S VT', the VT' buffer read row-major is our u and the U'
  // buffer read row-major is our vh.
  const int ml = as_int(n), nl = as_int(m);
  const int r = std::min(ml, nl);
  std::vector<cplx> work_a(a, a + m * n);
  std::vector<cplx> u_l(static_cast<std::size_t>(ml) * r);
  std::vector<cplx> vt_l(static_cast<std::size_t>(r) * nl);
  s.assign(r, 0.0);

  const std::size_t mx = std::max(ml, nl);
  std::vector<double> rwork(
      std::max<std::size_t>(1, static_cast<std::size_t>(r) *
                                   std::max<std::size_t>(5 * r + 7, 2 * mx + 2 * r + 1)));
  std::vector<int> iwork(8 * static_cast<std::size_t>(r));
  const int ldu = ml, ldvt = r;
  int info = 0, lwork = -1;
  cplx wsize;
  const char jobz = 'S';
  zgesdd_(&jobz, &ml, &nl, work_a.data(), &ml, s.data(), u_l.data(), &ldu, vt_l.data(),
          &ldvt, &wsize, &lwork, rwork.data(), iwork.data(), &info);
  if (info == 0) {
    lwork = static_cast<int>(wsize.real()) + 16;
    std::vector<cplx> work(lwork);
    zgesdd_(&jobz, &ml, &nl, work_a.data(), &ml, s.data(), u_l.data(), &ldu, vt_l.data(),
            &ldvt, work.data(), &lwork, rwork.data(), iwork.data(), &info);
  }
  if (info != 0) {
    // Divide-and-conquer occasionally refuses to converge; retry with zgesvd.
    work_a.assign(a, a + m * n);
    std::vector<double> rwork2(5 * static_cast<std::size_t>(r) + 1);
    const char job = 'S';
    info = 0;
    lwork = -1;
    zgesvd_(&job, &job, &ml, &nl, work_a.data(), &ml, s.data(), u_l.data(), &ldu,
            vt_l.data(), &ldvt, &wsize, &lwork, rwork2.data(), &info);
    if (info == 0) {
      lwork = static_cast<int>(wsize.real()) + 16;
      std::vector<cplx> work(lwork);
      zgesvd_(&job, &job, &ml, &nl, work_a.data(), &ml, s.data(), u_l.data(), &ldu,
              vt_l.data(), &ldvt, work.data(), &lwork, rwork2.data(), &info);
    }
    if (info != 0) fail("zgesvd", info);
  }
  u.assign(vt_l.begin(), vt_l.end());  // row-major (m x r)
  vh.assign(u_l.begin(), u_l.end());   // row-major (r x n)
}

void heig(std::size_t n, const cplx* h, std::vector<double>& w, std::vector<cplx>& rows_w) {
  const int ni = as_int(n);
  rows_w.assign(h, h + n * n);  // column-major view is conj(h); same spectrum
  w.assign(n, 0.0);
  int info = 0, lwork = -1, lrwork = -1, liwork = -1;
  cplx wsize;
  double rwsize = 0;
  int iwsize = 0;
  const char jobz = 'V', uplo = 'L';
  zheevd_(&jobz, &uplo, &ni, rows_w.data(), &ni, w.data(), &wsize, &lwork, &rwsize,
          &lrwork, &iwsize, &liwork, &info);
  if (info != 0) fail("zheevd (query)", info);
  lwork = static_cast<int>(wsize.real()) + 16;
  lrwork = static_cast<int>(rwsize) + 16;
  liwork = iwsize + 16;
  std::vector<cplx> work(lwork);
  std::vector<double> rwork(lrwork);
  std::vector<int> iwork(liwork);
  zheevd_(&jobz, &uplo, &ni, rows_w.data(), &ni, w.data(), work.data(), &lwork,
          rwork.data(), &lrwork, iwork.data(), &liwork, &info);
  if (info != 0) fail("zheevd", info);
  // Columns of the column-major result are eigenvectors of conj(h); read
  // row-major, row j is conj(v_j) for the eigenvectors v_j of h.
}

void qr(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& q, std::vector<cplx>& r) {
  // Row-major QR of a == column-major LQ of the buffer.
  const int ml = as_int(n), nl = as_int(m);
  const int k = std::min(ml, nl);
  std::vector<cplx> buf(a, a + m * n);
  std::vector<cplx> tau(k);
  int info = 0, lwork = -1;
  cplx wsize;
  zgelqf_(&ml, &nl, buf.data(), &ml, tau.data(), &wsize, &lwork, &info);
  if (info != 0) fail("zgelqf (query)", info);
  lwork = static_cast<int>(wsize.real()) + 16;
  std::vector<cplx> work(lwork);
  zgelqf_(&ml, &nl, buf.data(), &ml, tau.data(), work.data(), &lwork, &info);
  if (info != 0) fail("zgelqf", info);

  // L is (n x k) lower-triangular column-major; r = L^T row-major (k x n).
  r.assign(static_cast<std::size_t>(k) * n, cplx(0));
  for (int j = 0; j < k; ++j)
    for (int i = j; i < ml; ++i) r[static_cast<std::size_t>(j) * n + i] = buf[i + static_cast<std::size_t>(j) * ml];

  lwork = -1;
  zunglq_(&k, &nl, &k, buf.data(), &ml, tau.data(), &wsize, &lwork, &info);
  if (info != 0) fail("zunglq (query)", info);
  lwork = static_cast<int>(wsize.real()) + 16;
  work.resize(lwork);
  zunglq_(&k, &nl, &k, buf.data(), &ml, tau.data(), work.data(), &lwork, &info);
  if (info != 0) fail("zunglq", info);

  // Q'' sits in the first k rows (column-major, lda = n); q = Q''^T (m x k).
  q.assign(m * static_cast<std::size_t>(k), cplx(0));
  for (std::size_t col = 0; col < m; ++col)
    for (int row = 0; row < k; ++row)
      q[col * k + row] = buf[static_cast<std::size_t>(row) + col * ml];
}

void lq(std::size_t m, std::size_t n, const cplx* a, std::vector<cplx>& l, std::vector<cplx>& q) {
  // Row-major LQ of a == column-major QR of the buffer.
  const int ml = as_int(n), nl = as_int(m);
  const int k = std::min(ml, nl);
  std::vector<cplx> buf(a, a + m * n);
  std::vector<cplx> tau(k);
  int info = 0, lwork = -1;
  cplx wsize;
  zgeqrf_(&ml, &nl, buf.data(), &ml, tau.data(), &wsize, &lwork, &info);
  if (info != 0) fail("zgeqrf (query)", info);
  lwork = static_cast<int>(wsize.real()) + 16;
  std::vector<cplx> work(lwork);
  zgeqrf_(&ml, &nl, buf.data(), &ml, tau.data(), work.data(), &lwork, &info);
  if (info != 0) fail("zgeqrf", info);

  // R is (k x m) upper-triangular column-major; l = R^T row-major (m x k).
  l.assign(m * static_cast<std::size_t>(k), cplx(0));
  for (std::size_t col = 0; col < m; ++col)
    for (int row = 0; row < k && row <= static_cast<int>(col); ++row)
      l[col * k + row] = buf[static_cast<std::size_t>(row) + col * ml];

  lwork = -1;
  zungqr_(&ml, &k, &k, buf.data(), &ml, tau.data(), &wsize, &lwork, &info);
  if (info != 0) fail("zungqr (query)", info);
  lwork = static_cast<int>(wsize.real()) + 16;
  work.resize(lwork);
  zungqr_(&ml, &k, &k, buf.data(), &ml, tau.data(), work.data(), &lwork, &info);
  if (info != 0) fail("zungqr", info);

  // Q_cm is (n x k) column-major with lda = n: contiguous, and reading the
  // same memory row-major gives exactly q = Q_cm^T (k x n).
  q.assign(buf.begin(), buf.begin() + static_cast<std::size_t>(k) * n);
}

}  // namespace qca::la
