#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtop/laurent.hpp"

namespace qtop {

enum class AZLabel { A, AIII, AI, BDI, D, DIII, AII, CII, C, CI };

enum class Antiunitary { None, Real, Quaternionic };

/// Algebraic relations on a matrix function x. tau acts as x -> x(conj p)^T,
/// sharp-tau as x -> Omega x(conj p)^T Omega^{-1}; see LaurentSymbol.
enum class Relation {
  Hermitian,             // x = x*
  ChiralAnticommute,     // Pi x + x Pi = 0
  TauEqualsSelf,         // x^tau = x
  TauEqualsAdjoint,      // x^tau = x*
  TauEqualsMinusSelf,    // x^tau = -x
  SharpEqualsSelf,       // x^{sharp tau} = x
  SharpEqualsAdjoint,    // x^{sharp tau} = x*
  SharpEqualsMinusSelf,  // x^{sharp tau} = -x
};

struct AZClassSpec {
  AZLabel label = AZLabel::A;
  int degree = 0;
  bool chiral = false;
  Antiunitary antiunitary_kind = Antiunitary::None;
  /// Relations on the Hamiltonian H itself (hermiticity, chiral anticommutation).
  std::vector<Relation> hamiltonian_relations;
  /// Relations from the KO table, acting on x = h (chiral classes) or x = H.
  std::vector<Relation> relations;
};

AZClassSpec az_class(AZLabel label);
std::optional<AZLabel> parse_az_label(std::string_view text);
std::string to_string(AZLabel label);
std::string to_string(Relation relation);

/// diag(1_{n/2}, -1_{n/2}).
Matrix default_chirality(int band_dim);
/// Omega m^T Omega^{-1}.
Matrix sharp_matrix(const Matrix& m);

/// Off-diagonal block h of H = [[0, h^*], [h, 0]].
LaurentSymbol chiral_block(const LaurentSymbol& hamiltonian);

struct RelationCheck {
  Relation relation;
  bool on_block = false;           // checked on h rather than H
  double coefficient_violation;    // max Frobenius norm over coefficients
  double grid_violation;           // max Frobenius norm over the sample grid
  bool pass;
};

struct SymmetryReport {
  AZLabel label;
  std::vector<RelationCheck> checks;
  bool pass() const;
  double max_violation() const;
};

/// Validates `symbol` (the full Hamiltonian H, or any symbol for class A with
/// no hermiticity requirement skipped) against the relations of `spec`.
/// Throws DimensionMismatch when the band dimension is incompatible.
SymmetryReport check_symmetry(const LaurentSymbol& symbol, const AZClassSpec& spec,
                              int grid = 16, double tol = 1e-12);

/// Pointwise residual of `relation` for values x(p) and x(nu p), where nu is
/// entrywise conjugation of the coordinates.
double relation_residual(Relation relation, const Matrix& x_at_p, const Matrix& x_at_nu_p,
                         const Matrix& chirality);

}  // namespace qtop
