#include "qtop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qtop/errors.hpp"

namespace qtop::linalg {
namespace {

// LAPACK QR-iteration SVD (zgesvd). The divide-and-conquer drivers (Eigen's
// BDCSVD, zgesdd) return wrong factors for some banded Toeplitz sections with
// clustered singular values.
RealVector gesvd(Matrix a, Matrix* u, Matrix* vh) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  RealVector s(k);
  char job = 'N';
  if (u && vh) {
    job = 'S';
    u->resize(m, k);
    vh->resize(k, n);
  }
  RealVector superb(std::max<lapack_int>(1, k));
  const lapack_int info =
      LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, m, n, a.data(), m, s.data(), u ? u->data() : nullptr, m,
                     vh ? vh->data() : nullptr, std::max<lapack_int>(1, k), superb.data());
  if (info != 0) {
    throw Error(ErrorKind::NonConvergent, "SVD failed (zgesvd info " + std::to_string(info) + ")");
  }
  return s;
}

}  // namespace

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  return gesvd(m, nullptr, nullptr);
}

SvdSolve svd_solve(const Matrix& a, const Matrix& b) {
  Matrix u, vh;
  SvdSolve out;
  out.singular_values = gesvd(a, &u, &vh);
  const RealVector& s = out.singular_values;
  const double cut = s.size() ? s(0) * std::numeric_limits<double>::epsilon() * std::max(a.rows(), a.cols()) : 0.0;
  Matrix c = u.adjoint() * b;
  for (Eigen::Index i = 0; i < s.size(); ++i) c.row(i) *= s(i) > cut ? 1.0 / s(i) : 0.0;
  out.x = vh.adjoint() * c;
  return out;
}

double sigma_min(const Matrix& m) {
  const RealVector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double condition_number(const Matrix& m) {
  const RealVector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

int numerical_nullity(const RealVector& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double cut = rel_tol * s(0);
  int count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < cut) ++count;
  }
  return count;
}

HermitianEigen hermitian_eigen(const Matrix& h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  if (n == 0) return {};
  // Divide and conquer first; verified, with the QR-iteration driver as fallback.
  for (const bool divide : {true, false}) {
    Matrix a = h;
    RealVector w(n);
    const lapack_int info = divide ? LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data())
                                   : LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0) continue;
    // Randomized check of H Z = Z diag(w) and Z^* Z = I in O(n^2).
    const Vector r = Vector::Random(n).normalized();
    const Vector zr = a * r;
    const double scale = std::max(1.0, h.norm());
    const Vector wr = (w.cast<Complex>().array() * r.array()).matrix();
    const double residual = (h * zr - a * wr).norm();
    const double orth = (a.adjoint() * zr - r).norm();
    if (residual <= 1e-10 * scale && orth <= 1e-10) return {w, a};
  }
  throw Error(ErrorKind::NonConvergent, "hermitian eigendecomposition failed");
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

}  // namespace qtop::linalg
