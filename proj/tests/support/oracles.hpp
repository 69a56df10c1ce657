#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "qtop/laurent.hpp"

namespace qtop::testing {

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix unit_entry(int n, int r, int c, Complex v = 1.0) {
  Matrix m = Matrix::Zero(n, n);
  m(r, c) = v;
  return m;
}

// f(z, w) = [[z, -1/w], [w, 1/z]]: canonical in both variables, index 1.
inline LaurentSymbol golden() {
  return LaurentSymbol::from_terms(2, 2, {{{1, 0}, unit_entry(2, 0, 0)},
                                          {{0, -1}, unit_entry(2, 0, 1, -1.0)},
                                          {{0, 1}, unit_entry(2, 1, 0)},
                                          {{-1, 0}, unit_entry(2, 1, 1)}});
}

// Extended symbol of golden() written out by hand: z on the circle, w in the disk.
inline Matrix golden_extended_td(Complex z, Complex w) {
  return mat2(-z * std::norm(w) + 2.0 * z, -std::conj(w), w, 1.0 / z);
}

// z in the disk, w on the circle.
inline Matrix golden_extended_dt(Complex z, Complex w) {
  return mat2(z, -1.0 / w, -w * std::norm(z) + 2.0 * w, std::conj(z));
}

inline Matrix random_matrix(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng)) * scale;
  }
  return m;
}

// Normalized to spectral norm `norm`.
inline Matrix random_with_norm(std::mt19937_64& rng, int n, double norm) {
  Matrix m = random_matrix(rng, n, 1.0);
  const double s = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  return m * (norm / s);
}

inline Matrix random_unitary(std::mt19937_64& rng, int n) {
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, 1.0));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// f = (I + A/z) diag(z^kappa) (B0 + B1 z) with |A|, |B0^{-1} B1| < 1, so the
// three factors are a minus factor, the index part and a plus factor of a
// right factorization whose partial indices are kappa.
inline LaurentSymbol product_with_indices(std::mt19937_64& rng, const std::vector<int>& kappa) {
  const int n = static_cast<int>(kappa.size());
  const Matrix a = random_with_norm(rng, n, 0.4);
  const Matrix b0 = random_unitary(rng, n);
  const Matrix b1 = b0 * random_with_norm(rng, n, 0.4);
  const LaurentSymbol minus = LaurentSymbol::from_terms(1, n, {{{0}, Matrix::Identity(n, n)}, {{-1}, a}});
  LaurentSymbol lambda(1, n);
  for (int i = 0; i < n; ++i) lambda = lambda + LaurentSymbol::monomial({kappa[i]}, unit_entry(n, i, i));
  const LaurentSymbol plus = LaurentSymbol::from_terms(1, n, {{{0}, b0}, {{1}, b1}});
  return minus * lambda * plus;
}

inline std::vector<int> sorted_desc(std::vector<int> k) {
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

// I + eps * (sum of random monomials of degree <= 1 in z, w): index 0 for small eps.
inline LaurentSymbol near_identity(std::mt19937_64& rng, int n, double eps) {
  LaurentSymbol f = LaurentSymbol::identity(2, n);
  for (const Exponent& e : {Exponent{1, 0}, Exponent{0, 1}, Exponent{-1, 0}, Exponent{0, -1}, Exponent{1, -1}}) {
    f = f + LaurentSymbol::monomial(e, random_with_norm(rng, n, eps));
  }
  return f;
}

}  // namespace qtop::testing
