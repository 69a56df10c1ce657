#pragma once

#include <vector>

#include "qtop/laurent.hpp"

namespace qtop {

struct FactorizationOptions {
  /// Series truncation order; 0 selects automatic doubling from
  /// min_truncation up to max_truncation.
  int truncation = 0;
  int min_truncation = 32;
  int max_truncation = 4096;
  /// Residual target for automatic truncation.
  double tol = 1e-10;
  /// Singular values below kernel_tol * sigma_max count as zero.
  double kernel_tol = 1e-8;
  /// First section size of the kernel-dimension escalation.
  int kernel_min_size = 16;
  /// Smallest admissible |det f| on the circle, relative to the coefficient scale.
  double det_tol = 1e-10;
  int verify_grid = 512;
  double condition_cap = 1e12;
};

/// Right canonical factorization f = f_- f_+ of a one-variable symbol,
/// normalized by f_-(infinity) = I. f_+^{-1} is kept as its Taylor series
/// sum_k h_k z^k; f_- is the polynomial sum_k c_k z^{-k} in z^{-1}.
struct FactorizationResult {
  std::vector<int> partial_indices;
  std::vector<Matrix> plus_inverse_coeffs;  // h_0 .. h_M
  std::vector<Matrix> minus_coeffs;         // c_0 = I, c_1, ...
  int truncation_order = 0;
  double residual = 0.0;
  double section_condition = 1.0;
  double plus_condition = 1.0;  // max condition number of f_+ over sampled closed disk

  int band_dim() const { return static_cast<int>(plus_inverse_coeffs.front().rows()); }

  /// f_-(z) for |z| >= 1.
  Matrix minus_at(Complex z) const;
  /// f_-(conj(w)^{-1}) = sum_k c_k conj(w)^k, defined on the closed unit disk.
  Matrix minus_reflected(Complex w) const;
  Matrix plus_inverse_at(Complex z) const;
  Matrix plus_at(Complex z) const;
  /// f^e(z) = f_-(conj(z)^{-1}) f_+(z) on the closed unit disk.
  Matrix extended_at(Complex z) const;
};

/// Partial indices, nonincreasing, from kernel dimensions of the Toeplitz
/// operators of z^m f over a window of shifts m.
std::vector<int> partial_indices(const LaurentSymbol& symbol,
                                 const FactorizationOptions& options = {});

/// True iff all partial indices vanish (winding of det is zero and T_f is injective).
bool is_canonical(const LaurentSymbol& symbol, const FactorizationOptions& options = {});

/// Throws NotCanonicalError (carrying the indices), NonConvergent or IllConditioned.
FactorizationResult canonical_factorize(const LaurentSymbol& symbol,
                                        const FactorizationOptions& options = {});

struct FactorizationCheck {
  double residual;           // sup |f_- f_+ - f|_F on the grid
  double equation_residual;  // sup |f (sum h_k z^k) - f_-|_F on the grid
  double tail_ratio;         // |h_M| / |h_0|
  bool tail_ok;              // tail_ratio <= 1e-6
};

FactorizationCheck verify_factorization(const LaurentSymbol& symbol,
                                        const FactorizationResult& result, int grid = 512);

struct RadialScanResult {
  std::vector<double> radii;
  std::vector<double> sigma_min;
  double min_sigma() const;
};

/// Smallest singular value of the square finite section (size `section`
/// blocks) of the Toeplitz operator with symbol z -> f^e(t z), for each t.
RadialScanResult radial_scan(const LaurentSymbol& symbol, const FactorizationResult& result,
                             const std::vector<double>& radii, int section = 64);

// Finite sections. Entry (j, k) holds the Fourier coefficient a_{j-k}.

/// Square section on sites 0..size-1 of a one-variable symbol.
Matrix toeplitz_section(const LaurentSymbol& symbol, int size);
/// Section with `size` input sites and every output site they reach, so the
/// restriction of T_f to those inputs is represented exactly.
Matrix toeplitz_tall_section(const LaurentSymbol& symbol, int size);

/// dim ker T_f from tall sections, escalating the size until two consecutive
/// sizes agree. Throws NonConvergent otherwise.
int toeplitz_kernel_dim(const LaurentSymbol& symbol, const FactorizationOptions& options = {});

/// min(lower bound of T_f, lower bound of T_f^*) estimated from tall sections;
/// zero iff T_f fails to be invertible (up to the section size).
double toeplitz_gap(const LaurentSymbol& symbol, int size = 32);

/// Minimum |det f| over `samples` points of the circle.
double min_abs_det_on_circle(const LaurentSymbol& symbol, int samples);

// Half-plane invertibility of a two-variable symbol, read off one-variable
// slices. direction = index of the factorized variable.

struct SliceFailure {
  int direction;
  double angle;  // angle of the fixed (parallel) variable
  std::vector<int> indices;
};

struct HalfPlaneCertificate {
  bool fredholm = true;
  std::vector<SliceFailure> failures;
  double min_gap[2] = {0.0, 0.0};
};

HalfPlaneCertificate certify_half_planes(const LaurentSymbol& symbol, int samples,
                                         const FactorizationOptions& options = {});

}  // namespace qtop
