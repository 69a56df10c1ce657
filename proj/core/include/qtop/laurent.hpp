#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qtop/types.hpp"

namespace qtop {

using Exponent = std::vector<int>;

/// Matrix-valued Laurent polynomial in `num_vars` torus variables,
///   f(z_1, ..., z_d) = sum_j a_j z_1^{j_1} ... z_d^{j_d},
/// with a_j complex band_dim x band_dim matrices. Immutable once built; zero
/// coefficients are never stored.
class LaurentSymbol {
 public:
  using TermMap = std::map<Exponent, Matrix>;

  LaurentSymbol(int num_vars, int band_dim);

  /// Rejects duplicate exponent vectors (DuplicateExponent) and wrongly sized
  /// exponents or matrices (DimensionMismatch).
  static LaurentSymbol from_terms(int num_vars, int band_dim,
                                  const std::vector<std::pair<Exponent, Matrix>>& terms);
  static LaurentSymbol constant(int num_vars, const Matrix& value);
  static LaurentSymbol identity(int num_vars, int band_dim);
  static LaurentSymbol monomial(const Exponent& exponent, const Matrix& coefficient);

  int num_vars() const noexcept { return num_vars_; }
  int band_dim() const noexcept { return band_dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient for `exponent`, or the zero matrix.
  Matrix coefficient(const Exponent& exponent) const;

  int min_exponent(int var) const;
  int max_exponent(int var) const;
  int spread(int var) const { return max_exponent(var) - min_exponent(var); }
  /// Largest |j_var| over all terms and variables.
  int hopping_range() const;

  /// Sum of Frobenius norms of the coefficients.
  double coefficient_norm() const;

  Matrix eval(std::span<const Complex> point) const;
  Matrix eval(std::initializer_list<Complex> point) const {
    return eval(std::span<const Complex>(point.begin(), point.size()));
  }

  /// a_j -> a_{-j}^*: pointwise conjugate transpose on the torus.
  LaurentSymbol adjoint() const;
  /// a_j -> a_{-j}^T: the transposition x -> x(conj z)^T on the torus.
  LaurentSymbol transpose_tau() const;
  /// a_j -> Omega a_{-j}^T Omega^{-1}, Omega = diag(eps, ..., eps) with
  /// eps = [[0,1],[-1,0]]; requires even band_dim.
  LaurentSymbol sharp_tau() const;

  /// Multiplies by z_var^power.
  LaurentSymbol shifted(int var, int power) const;
  /// Fixes variable `var` to `value`, returning a symbol in num_vars - 1 variables.
  LaurentSymbol specialize(int var, Complex value) const;
  /// Reorders variables: new variable k is old variable order[k].
  LaurentSymbol permuted(const std::vector<int>& order) const;
  /// U f U^* for a constant matrix U.
  LaurentSymbol conjugated(const Matrix& u) const;
  LaurentSymbol scaled(Complex factor) const;

  friend LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b);
  friend LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b);
  friend LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b);

 private:
  void accumulate(const Exponent& exponent, const Matrix& coefficient);
  void prune();

  int num_vars_;
  int band_dim_;
  TermMap terms_;
};

/// Largest Frobenius-norm difference between matching coefficients.
double coefficient_distance(const LaurentSymbol& a, const LaurentSymbol& b);

/// H = [[0, h^*], [h, 0]]; doubles band_dim.
LaurentSymbol assemble_chiral(const LaurentSymbol& h);
/// Block diagonal diag(a, b).
LaurentSymbol direct_sum(const LaurentSymbol& a, const LaurentSymbol& b);

/// One-variable restriction of a multivariable symbol: `active_var` runs over
/// the circle, the remaining variables sit at `fixed_point` (which lists only
/// the other variables, in order).
class SliceSymbol {
 public:
  SliceSymbol(LaurentSymbol parent, int active_var, std::vector<Complex> fixed_point);

  const LaurentSymbol& parent() const noexcept { return parent_; }
  int active_var() const noexcept { return active_var_; }
  const std::vector<Complex>& fixed_point() const noexcept { return fixed_point_; }

  Matrix eval(Complex z) const;
  /// The slice as a one-variable symbol.
  LaurentSymbol to_symbol() const;

 private:
  LaurentSymbol parent_;
  int active_var_;
  std::vector<Complex> fixed_point_;
};

SliceSymbol slice(const LaurentSymbol& symbol, int active_var,
                  std::vector<Complex> fixed_point);

/// det f(e^{2 pi i k / samples}) for k = 0..samples-1; one-variable symbols.
std::vector<Complex> det_on_circle(const LaurentSymbol& symbol, int samples);

/// Eval of a one-variable symbol.
Matrix eval1(const LaurentSymbol& symbol, Complex z);

}  // namespace qtop
