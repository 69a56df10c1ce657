#include "qtop/symmetry.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "qtop/errors.hpp"

namespace qtop {
namespace {

constexpr std::array<std::pair<AZLabel, std::string_view>, 10> kLabels{{
    {AZLabel::A, "A"},
    {AZLabel::AIII, "AIII"},
    {AZLabel::AI, "AI"},
    {AZLabel::BDI, "BDI"},
    {AZLabel::D, "D"},
    {AZLabel::DIII, "DIII"},
    {AZLabel::AII, "AII"},
    {AZLabel::CII, "CII"},
    {AZLabel::C, "C"},
    {AZLabel::CI, "CI"},
}};

LaurentSymbol relation_defect(Relation r, const LaurentSymbol& x, const Matrix& pi) {
  switch (r) {
    case Relation::Hermitian:
      return x - x.adjoint();
    case Relation::ChiralAnticommute: {
      const LaurentSymbol p = LaurentSymbol::constant(x.num_vars(), pi);
      return p * x + x * p;
    }
    case Relation::TauEqualsSelf:
      return x.transpose_tau() - x;
    case Relation::TauEqualsAdjoint:
      return x.transpose_tau() - x.adjoint();
    case Relation::TauEqualsMinusSelf:
      return x.transpose_tau() + x;
    case Relation::SharpEqualsSelf:
      return x.sharp_tau() - x;
    case Relation::SharpEqualsAdjoint:
      return x.sharp_tau() - x.adjoint();
    case Relation::SharpEqualsMinusSelf:
      return x.sharp_tau() + x;
  }
  return x;
}

double max_on_grid(const LaurentSymbol& s, int grid) {
  if (s.is_zero()) return 0.0;
  const int d = s.num_vars();
  std::vector<Complex> point(d);
  std::vector<int> idx(d, 0);
  double worst = 0.0;
  while (true) {
    for (int v = 0; v < d; ++v) point[v] = unit(kTwoPi * (idx[v] + 0.5) / grid);
    worst = std::max(worst, s.eval(point).norm());
    int v = 0;
    while (v < d && ++idx[v] == grid) idx[v++] = 0;
    if (v == d) break;
  }
  return worst;
}

bool is_quaternionic(Relation r) {
  return r == Relation::SharpEqualsSelf || r == Relation::SharpEqualsAdjoint ||
         r == Relation::SharpEqualsMinusSelf;
}

}  // namespace

AZClassSpec az_class(AZLabel label) {
  AZClassSpec s;
  s.label = label;
  s.hamiltonian_relations = {Relation::Hermitian};
  switch (label) {
    case AZLabel::A:
      s.degree = 0;
      break;
    case AZLabel::AIII:
      s.degree = 1;
      s.chiral = true;
      break;
    case AZLabel::AI:
      s.degree = 0;
      s.antiunitary_kind = Antiunitary::Real;
      s.relations = {Relation::TauEqualsAdjoint};
      break;
    case AZLabel::BDI:
      s.degree = 1;
      s.chiral = true;
      s.antiunitary_kind = Antiunitary::Real;
      s.relations = {Relation::TauEqualsAdjoint};
      break;
    case AZLabel::D:
      s.degree = 2;
      s.antiunitary_kind = Antiunitary::Real;
      s.relations = {Relation::TauEqualsMinusSelf};
      break;
    case AZLabel::DIII:
      s.degree = 3;
      s.chiral = true;
      s.antiunitary_kind = Antiunitary::Quaternionic;
      s.relations = {Relation::SharpEqualsSelf};
      break;
    case AZLabel::AII:
      s.degree = 4;
      s.antiunitary_kind = Antiunitary::Quaternionic;
      s.relations = {Relation::SharpEqualsAdjoint};
      break;
    case AZLabel::CII:
      s.degree = 5;
      s.chiral = true;
      s.antiunitary_kind = Antiunitary::Quaternionic;
      s.relations = {Relation::SharpEqualsAdjoint};
      break;
    case AZLabel::C:
      s.degree = 6;
      s.antiunitary_kind = Antiunitary::Quaternionic;
      s.relations = {Relation::SharpEqualsMinusSelf};
      break;
    case AZLabel::CI:
      s.degree = -1;
      s.chiral = true;
      s.antiunitary_kind = Antiunitary::Real;
      s.relations = {Relation::TauEqualsSelf};
      break;
  }
  if (s.chiral) s.hamiltonian_relations.push_back(Relation::ChiralAnticommute);
  return s;
}

std::optional<AZLabel> parse_az_label(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& [label, name] : kLabels) {
    if (upper == name) return label;
  }
  return std::nullopt;
}

std::string to_string(AZLabel label) {
  for (const auto& [l, name] : kLabels) {
    if (l == label) return std::string(name);
  }
  return "?";
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::Hermitian: return "x = x*";
    case Relation::ChiralAnticommute: return "Pi x = -x Pi";
    case Relation::TauEqualsSelf: return "x^tau = x";
    case Relation::TauEqualsAdjoint: return "x^tau = x*";
    case Relation::TauEqualsMinusSelf: return "x^tau = -x";
    case Relation::SharpEqualsSelf: return "x^#tau = x";
    case Relation::SharpEqualsAdjoint: return "x^#tau = x*";
    case Relation::SharpEqualsMinusSelf: return "x^#tau = -x";
  }
  return "?";
}

Matrix default_chirality(int band_dim) {
  if (band_dim % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "chiral structure needs an even band dimension");
  }
  Matrix pi = Matrix::Identity(band_dim, band_dim);
  pi.bottomRightCorner(band_dim / 2, band_dim / 2) *= -1.0;
  return pi;
}

Matrix sharp_matrix(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "quaternionic transposition needs even size");
  }
  Matrix omega = Matrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; b += 2) {
    omega(b, b + 1) = 1.0;
    omega(b + 1, b) = -1.0;
  }
  return omega * m.transpose() * omega.transpose();
}

LaurentSymbol chiral_block(const LaurentSymbol& hamiltonian) {
  const int n = hamiltonian.band_dim();
  if (n % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "chiral Hamiltonian needs an even band dimension");
  }
  std::vector<std::pair<Exponent, Matrix>> terms;
  for (const auto& [e, a] : hamiltonian.terms()) {
    Matrix block = a.bottomLeftCorner(n / 2, n / 2);
    if (block.cwiseAbs().maxCoeff() > 0.0) terms.emplace_back(e, block);
  }
  return LaurentSymbol::from_terms(hamiltonian.num_vars(), n / 2, terms);
}

bool SymmetryReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.pass; });
}

double SymmetryReport::max_violation() const {
  double worst = 0.0;
  for (const auto& c : checks) {
    worst = std::max({worst, c.coefficient_violation, c.grid_violation});
  }
  return worst;
}

SymmetryReport check_symmetry(const LaurentSymbol& symbol, const AZClassSpec& spec, int grid,
                              double tol) {
  const int n = symbol.band_dim();
  if (spec.chiral && n % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "class " + to_string(spec.label) + " needs an even band dimension");
  }
  const int block_dim = spec.chiral ? n / 2 : n;
  if (spec.antiunitary_kind == Antiunitary::Quaternionic && block_dim % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "quaternionic class " + to_string(spec.label) +
                    " needs an even effective matrix size");
  }

  SymmetryReport report{spec.label, {}};
  const Matrix pi = spec.chiral ? default_chirality(n) : Matrix::Identity(n, n);
  auto run = [&](Relation r, const LaurentSymbol& x, bool on_block) {
    const LaurentSymbol defect = relation_defect(r, x, pi);
    double coeff = 0.0;
    for (const auto& [_, a] : defect.terms()) coeff = std::max(coeff, a.norm());
    const double on_grid = max_on_grid(defect, grid);
    report.checks.push_back({r, on_block, coeff, on_grid, std::max(coeff, on_grid) <= tol});
  };

  for (Relation r : spec.hamiltonian_relations) run(r, symbol, false);
  if (spec.chiral) {
    const LaurentSymbol h = chiral_block(symbol);
    for (Relation r : spec.relations) run(r, h, true);
  } else {
    for (Relation r : spec.relations) {
      if (is_quaternionic(r) && n % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch, "quaternionic relation needs even size");
      }
      run(r, symbol, false);
    }
  }
  return report;
}

double relation_residual(Relation relation, const Matrix& x, const Matrix& x_nu,
                         const Matrix& chirality) {
  switch (relation) {
    case Relation::Hermitian:
      return (x - x.adjoint()).norm();
    case Relation::ChiralAnticommute:
      return (chirality * x + x * chirality).norm();
    case Relation::TauEqualsSelf:
      return (x_nu.transpose() - x).norm();
    case Relation::TauEqualsAdjoint:
      return (x_nu.transpose() - x.adjoint()).norm();
    case Relation::TauEqualsMinusSelf:
      return (x_nu.transpose() + x).norm();
    case Relation::SharpEqualsSelf:
      return (sharp_matrix(x_nu) - x).norm();
    case Relation::SharpEqualsAdjoint:
      return (sharp_matrix(x_nu) - x.adjoint()).norm();
    case Relation::SharpEqualsMinusSelf:
      return (sharp_matrix(x_nu) + x).norm();
  }
  return 0.0;
}

}  // namespace qtop
