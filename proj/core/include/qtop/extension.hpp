#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qtop/laurent.hpp"
#include "qtop/symmetry.hpp"
#include "qtop/wienerhopf.hpp"

namespace qtop {

// The boundary of the bidisk is covered by two solid tori:
//   TD: z = e^{i theta} on the circle, w = rho e^{i phi} in the disk;
//   DT: z = rho e^{i theta} in the disk, w = e^{i phi} on the circle.
// At rho = 1 both describe the same point of the torus.
enum class Chart { TD, DT };

std::string to_string(Chart chart);

struct ChartPoint {
  Chart chart = Chart::TD;
  double theta = 0.0;
  double rho = 0.0;
  double phi = 0.0;
  std::optional<double> t;  // family parameter, when present

  Complex z() const;
  Complex w() const;
  /// Image under entrywise conjugation of (z, w).
  ChartPoint conjugated() const;
};

/// Parses "chart=TD|DT;theta=<x>;rho=<x>;phi=<x>[;t=<x>]" (keys in any order).
ChartPoint parse_chart_point(std::string_view text);
std::string format_chart_point(const ChartPoint& p);

/// Tensor grid on one chart. Values are flattened as (i * rhos + j) * phis + k.
struct ChartGrid {
  std::vector<double> thetas;
  std::vector<double> rhos;
  std::vector<double> phis;

  std::size_t size() const { return thetas.size() * rhos.size() * phis.size(); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * rhos.size() + j) * phis.size() + k;
  }
  /// n_angle uniform angles 2 pi k / n_angle and n_rho radii j / (n_rho - 1).
  static ChartGrid uniform(int n_theta, int n_rho, int n_phi);
};

/// A continuous map from the bidisk boundary (optionally times a circle) into
/// invertible matrices.
class ChartMap {
 public:
  virtual ~ChartMap() = default;
  virtual int band_dim() const = 0;
  virtual bool has_parameter() const { return false; }
  virtual Matrix eval(const ChartPoint& p) const = 0;
  virtual std::vector<Matrix> eval_grid(Chart chart, const ChartGrid& grid,
                                        std::optional<double> t = std::nullopt) const;
};

/// ChartMap given by an explicit formula in (z, w).
class ClosedFormMap : public ChartMap {
 public:
  using Fn = std::function<Matrix(Complex z, Complex w)>;
  ClosedFormMap(int band_dim, Fn fn) : band_dim_(band_dim), fn_(std::move(fn)) {}
  int band_dim() const override { return band_dim_; }
  Matrix eval(const ChartPoint& p) const override { return fn_(p.z(), p.w()); }

 private:
  int band_dim_;
  Fn fn_;
};

struct ExtensionOptions {
  int samples_per_circle = 64;
  /// Offset of the sampled angles, theta_s = phase + 2 pi s / samples.
  double phase = 0.0;
  int t_samples = 32;
  double t_phase = 0.0;
  FactorizationOptions factorization;
  /// Seam tolerance, relative to max(1, coefficient norm).
  double seam_tol = 1e-8;
  /// Interpolate factor coefficients trigonometrically between sampled
  /// angles instead of refactorizing.
  bool trig_interpolation = false;
  /// Slices per direction in the family gap scan.
  int gap_slices = 16;
};

/// Extended symbol f^E built from canonical factorizations of one-variable
/// slices: on TD, slices in w at fixed z; on DT, slices in z at fixed w.
/// Immutable after construction; evaluation away from sampled angles
/// refactorizes per call (or interpolates in the fast mode).
class ExtendedSymbol : public ChartMap {
 public:
  int band_dim() const override { return base_.band_dim(); }
  bool has_parameter() const override { return family_var_ >= 0; }
  Matrix eval(const ChartPoint& p) const override;
  std::vector<Matrix> eval_grid(Chart chart, const ChartGrid& grid,
                                std::optional<double> t = std::nullopt) const override;

  const LaurentSymbol& base() const noexcept { return base_; }
  int family_var() const noexcept { return family_var_; }
  const ExtensionOptions& options() const noexcept { return options_; }

  /// Factorization of the slice through the given angle (and t).
  FactorizationResult slice_factorization(Chart chart, double angle,
                                          std::optional<double> t = std::nullopt) const;
  /// Stored table entry; chart TD holds slices at z = e^{i theta_s}.
  const FactorizationResult& sample(Chart chart, int s, int t_index = 0) const;

  double sample_angle(int s) const;
  double t_sample(int k) const;

  /// Max over the seam check grid of |f^E(rho = 1) - f|.
  double seam_error() const noexcept { return seam_error_; }
  /// Largest slice factorization residual over the tables.
  double max_residual() const noexcept { return max_residual_; }
  /// Estimated error of the trigonometric interpolation mode (0 when off).
  double interpolation_error() const noexcept { return interpolation_error_; }
  bool interpolation_accurate() const;

  friend ExtendedSymbol build_extended(const LaurentSymbol&, const ExtensionOptions&);
  friend ExtendedSymbol build_extended_family(const LaurentSymbol&, int, const ExtensionOptions&);

 private:
  ExtendedSymbol(LaurentSymbol base, int family_var, ExtensionOptions options);

  LaurentSymbol surface(std::optional<double> t) const;
  LaurentSymbol slice_symbol(const LaurentSymbol& surface, Chart chart, double angle) const;
  std::optional<int> sample_index(double angle) const;
  std::optional<int> t_index(std::optional<double> t) const;
  FactorizationResult interpolated(Chart chart, double angle, int t_index) const;
  void check_point(const ChartPoint& p) const;

  LaurentSymbol base_;
  int family_var_ = -1;
  ExtensionOptions options_;
  // tables_[chart][t_index * samples + s]
  std::vector<FactorizationResult> tables_[2];
  double seam_error_ = 0.0;
  double max_residual_ = 0.0;
  double interpolation_error_ = 0.0;
};

/// Extended symbol of a two-variable symbol. Throws NotFredholmError when a
/// slice fails to factorize canonically, NonConvergent on residual or seam
/// failure.
ExtendedSymbol build_extended(const LaurentSymbol& symbol, const ExtensionOptions& options = {});

/// Family over the circle of variable `family_var` of a three-variable
/// symbol; the remaining variables, in order, are (z, w). Besides the sampled
/// t, the edge gap is minimized between samples; a closing there raises
/// NotFredholmError carrying the offending t.
ExtendedSymbol build_extended_family(const LaurentSymbol& symbol, int family_var,
                                     const ExtensionOptions& options = {});

Matrix eval_extended(const ChartMap& ext, const ChartPoint& p);

/// Restriction of a three-variable symbol to the surface t = e^{i t}.
LaurentSymbol family_surface(const LaurentSymbol& symbol, int family_var, double t);

struct FamilyGapScan {
  std::vector<double> t;
  std::vector<double> gap;  // min over slices of both half-plane directions
  double min_gap = 0.0;
  double argmin_t = 0.0;
  bool closed = false;  // a slice at argmin_t fails to be canonical
  std::vector<int> indices;
  int direction = -1;
  double parallel_angle = 0.0;
};

/// Samples the slice gap of the family and refines every pronounced local
/// minimum by golden-section search.
FamilyGapScan scan_family_gap(const LaurentSymbol& symbol, int family_var, int t_samples,
                              const ExtensionOptions& options = {});

struct MatrixCheck {
  double max_violation = 0.0;
  bool pass = true;
};

/// max ||f^E - (f^E)^*|| (or ||f^E + (f^E)^*|| when skew) over a grid of both charts.
MatrixCheck check_hermitian(const ChartMap& ext, int grid = 16, double tol = 1e-8,
                            bool skew = false, std::optional<double> t = std::nullopt);

/// Max violation over both charts of the relations of `spec` (the KO-table
/// relations, applied to the extended map itself) between f^E(p) and
/// f^E(nu p), nu conjugating both coordinates. Vacuous for classes without
/// such relations.
MatrixCheck check_equivariance(const ChartMap& ext, const AZClassSpec& spec, int grid = 16,
                               double tol = 1e-8, std::optional<double> t = std::nullopt);

/// CSV with columns chart,theta,rho,phi[,t],entry_row,entry_col,re,im.
void write_extended_csv(std::ostream& out, const ChartMap& ext, const ChartGrid& grid,
                        std::optional<double> t = std::nullopt);

}  // namespace qtop
