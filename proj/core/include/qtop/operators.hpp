#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "qtop/laurent.hpp"
#include "qtop/wienerhopf.hpp"

namespace qtop {

// Sites of a truncation. Lattice coordinate m belongs to the first variable,
// n to the second; site index = m * extent[1] + n.
//   Segment:   m in [0, M)                                 (one variable)
//   HalfPlane: `direction` kept as a half-line [0, L_perp), the other
//              variable periodic with L_par sites
//   Quarter:   (m, n) in [0, L)^2
enum class GeometryKind { Segment, HalfPlane, Quarter };

struct Geometry {
  GeometryKind kind = GeometryKind::Quarter;
  int extent[2] = {1, 1};
  int direction = 0;  // half-plane only

  static Geometry segment(int size);
  static Geometry half_plane(int direction, int l_par, int l_perp);
  static Geometry quarter(int size);

  int num_vars() const { return kind == GeometryKind::Segment ? 1 : 2; }
  int sites() const { return extent[0] * extent[1]; }
  bool periodic(int var) const { return kind == GeometryKind::HalfPlane && var != direction; }
  /// The same region with every non-periodic extent grown by `pad`.
  Geometry padded(int pad) const;
};

struct AssemblyOptions {
  /// Output region grows by this many sites in each truncated direction, so
  /// the map restricted to the input region is represented exactly.
  int pad = 0;
  int dense_cap = 6000;
};

/// Dense compression of a symbol: block (x, y) holds a_{x-y} for output site
/// x and input site y.
struct TruncatedOperator {
  Geometry input;
  Geometry output;
  int band_dim = 1;
  Matrix matrix;
};

TruncatedOperator assemble(const LaurentSymbol& symbol, const Geometry& geometry,
                           const AssemblyOptions& options = {});

/// Singular values below tol * sigma_max, counting missing ones for wide
/// matrices.
int kernel_dim(const TruncatedOperator& op, double tol = 1e-6);

struct IndexOptions {
  double tol = 1e-6;
  int certificate_samples = 16;
  bool certify = true;
  int dense_cap = 6000;
};

struct IndexAtSize {
  int size;
  int kernel;
  int cokernel;
  int index;
};

struct IndexReport {
  int index = 0;
  std::vector<IndexAtSize> per_size;
};

/// dim ker T - dim ker T^* of padded truncations at each size; the values
/// must agree (Unstable otherwise). Two-variable symbols use quarter
/// squares and are first certified Fredholm (NotFredholmError otherwise);
/// one-variable symbols use segments.
IndexReport numerical_index(const LaurentSymbol& symbol, const std::vector<int>& sizes,
                            const IndexOptions& options = {});

struct HalfPlaneGap {
  std::vector<int> perp_sizes;
  std::vector<double> sigma;
  double gap = 0.0;
  /// sigma keeps falling by at least 10% per doubling: the edge is gapless.
  bool closing = false;
};

/// Lower bound of the half-plane operator (and its adjoint) from padded
/// truncations with L_perp / 4, L_perp / 2 and L_perp half-line sites.
HalfPlaneGap half_plane_gap(const LaurentSymbol& symbol, int direction, int l_par, int l_perp,
                            int dense_cap = 6000);

struct CornerOptions {
  double zero_tol = 1e-6;
  /// Weight on the near quadrant [0, L/2)^2 above which a mode counts as
  /// sitting at the corner of the quarter plane.
  double corner_weight = 0.5;
  int dense_cap = 6000;
};

struct CornerMode {
  double lambda;
  double chirality;      // <psi|Pi|psi>, 0 without Pi
  double corner_weight;  // weight on [0, L/2)^2
  double participation;  // weight on the 4 x 4 corner block
};

struct CornerSpectrum {
  int size = 0;
  std::vector<double> eigenvalues;      // ascending
  std::vector<double> chirality;        // per eigenvector (empty without Pi)
  std::vector<double> participation;    // per eigenvector, 4 x 4 corner block
  std::vector<CornerMode> zero_modes;   // every |lambda| < zero_tol
  int corner_count = 0;                 // zero modes at the origin corner
  int signed_count = 0;                 // sum of sign(chirality) over those
  double next_eigenvalue = 0.0;         // smallest |lambda| >= zero_tol
  bool separated = false;               // next_eigenvalue > 10 zero_tol
};

/// Dense eigendecomposition of the quarter truncation of a hermitian symbol.
/// Inside the near-zero eigenspace, modes are resolved by chirality and then
/// by corner weight; modes at the other corners of the finite box are
/// reported but not counted. Throws NotHermitian, ChiralViolation.
CornerSpectrum corner_spectrum(const LaurentSymbol& hamiltonian, int size,
                               const std::optional<Matrix>& chirality = std::nullopt,
                               const CornerOptions& options = {});

/// CSV: [t,]eigenvalue_index,lambda[,chirality],participation_near_corner
void write_spectrum_csv(std::ostream& out, const CornerSpectrum& spectrum,
                        std::optional<double> t = std::nullopt, bool header = true);

struct Crossing {
  double t;
  int sign;  // +1 upward through zero, -1 downward
};

struct SpectralFlowResult {
  int flow = 0;
  std::vector<Crossing> crossings;
  std::vector<double> t;
  /// Eigenvalues inside the window per sample, ascending.
  std::vector<std::vector<double>> window_eigenvalues;
  int size = 0;
  int t_samples = 0;
};

struct FlowOptions {
  double window = 0.5;
  double overlap_floor = 0.7;
  /// Values with |lambda| below this carry no sign.
  double dead_band = 1e-10;
  /// Keep only eigenvectors weighted > corner_weight on [0, L/2)^2.
  bool corner_only = true;
  double corner_weight = 0.5;
  bool certify = true;
  int certificate_samples = 8;
  int dense_cap = 6000;
};

/// Selects eigenvectors to track.
using ModeFilter = std::function<bool(const Vector&)>;

/// Generic engine: eigenvalues of a hermitian matrix family inside
/// (-window, window), followed across samples by greedy maximal eigenvector
/// overlap and counted at sign changes. Closed loops use t_k = t0 + span
/// (k + 1/2) / n and match the last sample to the first; open paths include
/// both ends. Throws TrackingAmbiguous when a tracked mode well inside the
/// window has no partner above the overlap floor.
SpectralFlowResult track_spectral_flow(const std::function<Matrix(double)>& family, double t0,
                                       double t1, int samples, bool closed,
                                       const FlowOptions& options = {},
                                       const ModeFilter& filter = nullptr);

/// Spectral flow of the quarter truncations H(t) of a three-variable
/// hermitian symbol, t being variable `t_var`. Each sampled H(t) is first
/// certified to have invertible half-planes.
SpectralFlowResult spectral_flow(const LaurentSymbol& family, int t_var, int t_samples, int size,
                                 const FlowOptions& options = {});

/// Header: three little-endian uint64 (rows, cols, band_dim), then row-major
/// (re, im) doubles.
void write_dense_binary(std::ostream& out, const TruncatedOperator& op);
Matrix read_dense_binary(std::istream& in, int* band_dim = nullptr);

}  // namespace qtop
