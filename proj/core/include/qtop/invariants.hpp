#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtop/extension.hpp"
#include "qtop/symmetry.hpp"
#include "qtop/wienerhopf.hpp"

namespace qtop {

struct W3Options {
  int n_theta = 64;
  int n_rho = 33;  // odd, for Simpson's rule
  int n_phi = 64;
  /// Double the grid until the residual drops below `threshold`.
  bool refine = false;
  int max_refinements = 2;
  double threshold = 1e-2;
  /// Apply the calibrated orientation sign (off only for calibration itself).
  bool calibrated = true;
  std::optional<double> t;
};

struct W3Level {
  int n_theta, n_rho, n_phi;
  double raw;
  double residual;
};

struct W3Result {
  double raw_value = 0.0;
  int rounded = 0;
  double residual = 0.0;
  double imag_part = 0.0;  // integral of the imaginary part; zero up to discretization
  double chart_td = 0.0;   // oriented contributions, summing to raw_value
  double chart_dt = 0.0;
  int n_theta = 0, n_rho = 0, n_phi = 0;
  int orientation = 1;
  std::vector<W3Level> history;

  bool trusted(double threshold = 1e-2) const { return residual <= threshold; }
};

/// Three-dimensional winding number of a map on the bidisk boundary:
///   (1/24 pi^2) * integral of tr((g^{-1} dg)^3)
/// over the two solid-torus charts. Angular derivatives are spectral, radial
/// ones fourth-order finite differences; angles use the trapezoid rule and
/// the radius Simpson's rule. Throws NonConvergent when refinement stops
/// reducing the residual above the threshold.
W3Result w3(const ChartMap& map, const W3Options& options = {});

/// Sign making the Bott generator integrate to +1; computed once per process.
/// Throws CalibrationFailed when |raw| is not within 0.1 of 1.
int calibrate_orientation();

/// g0(z, w) = [[z, -conj w], [w, conj z]].
ClosedFormMap bott_generator();

/// Gapless invariant group of a class in two dimensions: "Z", "Z2" or "0".
std::string gapless_group_2d(AZLabel label);

struct GappedInvariantReport {
  AZLabel label = AZLabel::A;
  int degree = 0;
  std::string target_group;
  /// "W3(h^E)", "complex shadow W3(h^E)" or "not computed (...)".
  std::string invariant_tag;
  std::optional<int> invariant;
  std::optional<W3Result> w3;
  SymmetryReport symmetry;
  HalfPlaneCertificate certificate;
  std::optional<MatrixCheck> hermitian;
  std::optional<MatrixCheck> equivariance;
  std::vector<std::string> notes;
};

struct ReportOptions {
  int certificate_samples = 16;
  ExtensionOptions extension;
  W3Options w3;
  int check_grid = 8;
  double check_tol = 1e-8;
};

/// Builds the class-appropriate extension (h^E for chiral classes, H^E
/// otherwise), runs symmetry, hermiticity and equivariance checks and, for
/// chiral classes, the integer W3(h^E). Throws SymmetryViolation when H fails
/// the class relations and NotFredholmError when a half-plane is not
/// invertible.
GappedInvariantReport gapped_invariant_report(const LaurentSymbol& hamiltonian,
                                              const AZClassSpec& spec,
                                              const ReportOptions& options = {});

}  // namespace qtop
