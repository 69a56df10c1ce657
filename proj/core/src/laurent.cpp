#include "qtop/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtop/errors.hpp"

namespace qtop {
namespace {

std::string format_exponent(const Exponent& e) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << ']';
  return os.str();
}

Exponent negated(const Exponent& e) {
  Exponent out(e.size());
  std::transform(e.begin(), e.end(), out.begin(), [](int v) { return -v; });
  return out;
}

Complex int_power(Complex z, int n) {
  if (n == 0) return 1.0;
  Complex base = n > 0 ? z : 1.0 / z;
  unsigned k = static_cast<unsigned>(n > 0 ? n : -n);
  Complex acc = 1.0;
  while (k) {
    if (k & 1u) acc *= base;
    base *= base;
    k >>= 1u;
  }
  return acc;
}

Matrix sharp(const Matrix& m) {
  // Omega m^T Omega^{-1} with Omega = diag(eps, ...), eps = [[0,1],[-1,0]].
  const Eigen::Index n = m.rows();
  Matrix omega = Matrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; b += 2) {
    omega(b, b + 1) = 1.0;
    omega(b + 1, b) = -1.0;
  }
  return omega * m.transpose() * omega.transpose();
}

}  // namespace

LaurentSymbol::LaurentSymbol(int num_vars, int band_dim)
    : num_vars_(num_vars), band_dim_(band_dim) {
  if (num_vars < 1 || num_vars > 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "num_vars must be 1, 2 or 3 (got " + std::to_string(num_vars) + ")");
  }
  if (band_dim < 1) {
    throw Error(ErrorKind::DimensionMismatch, "band_dim must be positive");
  }
}

LaurentSymbol LaurentSymbol::from_terms(
    int num_vars, int band_dim, const std::vector<std::pair<Exponent, Matrix>>& terms) {
  LaurentSymbol out(num_vars, band_dim);
  for (const auto& [exponent, coeff] : terms) {
    if (static_cast<int>(exponent.size()) != num_vars) {
      throw Error(ErrorKind::DimensionMismatch,
                  "exponent " + format_exponent(exponent) + " has wrong length");
    }
    if (coeff.rows() != band_dim || coeff.cols() != band_dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "coefficient for exponent " + format_exponent(exponent) +
                      " is not " + std::to_string(band_dim) + "x" +
                      std::to_string(band_dim));
    }
    if (out.terms_.count(exponent)) {
      throw Error(ErrorKind::DuplicateExponent,
                  "duplicate exponent vector " + format_exponent(exponent));
    }
    out.terms_.emplace(exponent, coeff);
  }
  out.prune();
  return out;
}

LaurentSymbol LaurentSymbol::constant(int num_vars, const Matrix& value) {
  if (value.rows() != value.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "constant symbol must be square");
  }
  LaurentSymbol out(num_vars, static_cast<int>(value.rows()));
  out.accumulate(Exponent(num_vars, 0), value);
  out.prune();
  return out;
}

LaurentSymbol LaurentSymbol::identity(int num_vars, int band_dim) {
  return constant(num_vars, Matrix::Identity(band_dim, band_dim));
}

LaurentSymbol LaurentSymbol::monomial(const Exponent& exponent, const Matrix& coefficient) {
  LaurentSymbol out(static_cast<int>(exponent.size()), static_cast<int>(coefficient.rows()));
  out.accumulate(exponent, coefficient);
  out.prune();
  return out;
}

Matrix LaurentSymbol::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  if (it == terms_.end()) return Matrix::Zero(band_dim_, band_dim_);
  return it->second;
}

int LaurentSymbol::min_exponent(int var) const {
  int lo = 0;
  bool first = true;
  for (const auto& [e, _] : terms_) {
    lo = first ? e[var] : std::min(lo, e[var]);
    first = false;
  }
  return lo;
}

int LaurentSymbol::max_exponent(int var) const {
  int hi = 0;
  bool first = true;
  for (const auto& [e, _] : terms_) {
    hi = first ? e[var] : std::max(hi, e[var]);
    first = false;
  }
  return hi;
}

int LaurentSymbol::hopping_range() const {
  int r = 0;
  for (const auto& [e, _] : terms_) {
    for (int v : e) r = std::max(r, std::abs(v));
  }
  return r;
}

double LaurentSymbol::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [_, a] : terms_) s += a.norm();
  return s;
}

Matrix LaurentSymbol::eval(std::span<const Complex> point) const {
  if (static_cast<int>(point.size()) != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
  }
  for (int v = 0; v < num_vars_; ++v) {
    if (point[v] == Complex(0.0) && !terms_.empty() && min_exponent(v) < 0) {
      throw Error(ErrorKind::ZeroCoordinate,
                  "coordinate " + std::to_string(v) +
                      " is zero but the symbol has negative exponents in it");
    }
  }
  Matrix out = Matrix::Zero(band_dim_, band_dim_);
  for (const auto& [e, a] : terms_) {
    Complex factor = 1.0;
    for (int v = 0; v < num_vars_; ++v) factor *= int_power(point[v], e[v]);
    out += factor * a;
  }
  return out;
}

LaurentSymbol LaurentSymbol::adjoint() const {
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) out.terms_.emplace(negated(e), a.adjoint());
  return out;
}

LaurentSymbol LaurentSymbol::transpose_tau() const {
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) out.terms_.emplace(negated(e), a.transpose());
  return out;
}

LaurentSymbol LaurentSymbol::sharp_tau() const {
  if (band_dim_ % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "quaternionic transposition needs an even band dimension");
  }
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) out.terms_.emplace(negated(e), sharp(a));
  return out;
}

LaurentSymbol LaurentSymbol::shifted(int var, int power) const {
  if (var < 0 || var >= num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "shift variable out of range");
  }
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) {
    Exponent s = e;
    s[var] += power;
    out.terms_.emplace(std::move(s), a);
  }
  return out;
}

LaurentSymbol LaurentSymbol::specialize(int var, Complex value) const {
  if (num_vars_ < 2) {
    throw Error(ErrorKind::DimensionMismatch, "cannot specialize a one-variable symbol");
  }
  if (var < 0 || var >= num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "specialized variable out of range");
  }
  if (value == Complex(0.0) && min_exponent(var) < 0) {
    throw Error(ErrorKind::ZeroCoordinate, "cannot specialize a negative power at zero");
  }
  LaurentSymbol out(num_vars_ - 1, band_dim_);
  for (const auto& [e, a] : terms_) {
    Exponent rest;
    rest.reserve(e.size() - 1);
    for (int v = 0; v < num_vars_; ++v) {
      if (v != var) rest.push_back(e[v]);
    }
    out.accumulate(rest, int_power(value, e[var]) * a);
  }
  out.prune();
  return out;
}

LaurentSymbol LaurentSymbol::permuted(const std::vector<int>& order) const {
  if (static_cast<int>(order.size()) != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "permutation has wrong length");
  }
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) {
    Exponent p(num_vars_);
    for (int k = 0; k < num_vars_; ++k) p[k] = e[order[k]];
    out.terms_.emplace(std::move(p), a);
  }
  return out;
}

LaurentSymbol LaurentSymbol::conjugated(const Matrix& u) const {
  if (u.rows() != band_dim_ || u.cols() != band_dim_) {
    throw Error(ErrorKind::DimensionMismatch, "conjugating matrix has wrong size");
  }
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) out.accumulate(e, u * a * u.adjoint());
  out.prune();
  return out;
}

LaurentSymbol LaurentSymbol::scaled(Complex factor) const {
  LaurentSymbol out(num_vars_, band_dim_);
  for (const auto& [e, a] : terms_) out.accumulate(e, factor * a);
  out.prune();
  return out;
}

void LaurentSymbol::accumulate(const Exponent& exponent, const Matrix& coefficient) {
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) it->second += coefficient;
}

void LaurentSymbol::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.cwiseAbs().maxCoeff() == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

namespace {
void require_compatible(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.num_vars() != b.num_vars() || a.band_dim() != b.band_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "symbols have incompatible shapes");
  }
}
}  // namespace

LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b) {
  require_compatible(a, b);
  LaurentSymbol out = a;
  for (const auto& [e, m] : b.terms_) out.accumulate(e, m);
  out.prune();
  return out;
}

LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b) {
  return a + b.scaled(-1.0);
}

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
  require_compatible(a, b);
  LaurentSymbol out(a.num_vars_, a.band_dim_);
  for (const auto& [ea, ma] : a.terms_) {
    for (const auto& [eb, mb] : b.terms_) {
      Exponent e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.accumulate(e, ma * mb);
    }
  }
  out.prune();
  return out;
}

double coefficient_distance(const LaurentSymbol& a, const LaurentSymbol& b) {
  require_compatible(a, b);
  double worst = 0.0;
  for (const auto& [e, m] : a.terms()) worst = std::max(worst, (m - b.coefficient(e)).norm());
  for (const auto& [e, m] : b.terms()) worst = std::max(worst, (m - a.coefficient(e)).norm());
  return worst;
}

LaurentSymbol assemble_chiral(const LaurentSymbol& h) {
  const int n = h.band_dim();
  const LaurentSymbol hs = h.adjoint();
  std::map<Exponent, Matrix> acc;
  auto block = [&](const Exponent& e) -> Matrix& {
    auto [it, _] = acc.try_emplace(e, Matrix::Zero(2 * n, 2 * n));
    return it->second;
  };
  for (const auto& [e, a] : h.terms()) block(e).bottomLeftCorner(n, n) += a;
  for (const auto& [e, a] : hs.terms()) block(e).topRightCorner(n, n) += a;
  std::vector<std::pair<Exponent, Matrix>> terms(acc.begin(), acc.end());
  return LaurentSymbol::from_terms(h.num_vars(), 2 * n, terms);
}

LaurentSymbol direct_sum(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.num_vars() != b.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "direct sum needs equal num_vars");
  }
  const int na = a.band_dim();
  const int nb = b.band_dim();
  std::map<Exponent, Matrix> acc;
  auto block = [&](const Exponent& e) -> Matrix& {
    auto [it, _] = acc.try_emplace(e, Matrix::Zero(na + nb, na + nb));
    return it->second;
  };
  for (const auto& [e, m] : a.terms()) block(e).topLeftCorner(na, na) += m;
  for (const auto& [e, m] : b.terms()) block(e).bottomRightCorner(nb, nb) += m;
  std::vector<std::pair<Exponent, Matrix>> terms(acc.begin(), acc.end());
  return LaurentSymbol::from_terms(a.num_vars(), na + nb, terms);
}

SliceSymbol::SliceSymbol(LaurentSymbol parent, int active_var,
                         std::vector<Complex> fixed_point)
    : parent_(std::move(parent)),
      active_var_(active_var),
      fixed_point_(std::move(fixed_point)) {
  if (parent_.num_vars() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "slices need a multivariable parent");
  }
  if (active_var_ < 0 || active_var_ >= parent_.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "active variable out of range");
  }
  if (static_cast<int>(fixed_point_.size()) != parent_.num_vars() - 1) {
    throw Error(ErrorKind::DimensionMismatch, "fixed point has wrong dimension");
  }
}

Matrix SliceSymbol::eval(Complex z) const {
  std::vector<Complex> point;
  point.reserve(parent_.num_vars());
  for (int v = 0, k = 0; v < parent_.num_vars(); ++v) {
    point.push_back(v == active_var_ ? z : fixed_point_[k++]);
  }
  return parent_.eval(point);
}

LaurentSymbol SliceSymbol::to_symbol() const {
  // Specialize from the highest variable down so indices stay valid.
  LaurentSymbol s = parent_;
  std::vector<std::pair<int, Complex>> fixes;
  for (int v = 0, k = 0; v < parent_.num_vars(); ++v) {
    if (v != active_var_) fixes.emplace_back(v, fixed_point_[k++]);
  }
  for (auto it = fixes.rbegin(); it != fixes.rend(); ++it) s = s.specialize(it->first, it->second);
  return s;
}

SliceSymbol slice(const LaurentSymbol& symbol, int active_var,
                  std::vector<Complex> fixed_point) {
  return SliceSymbol(symbol, active_var, std::move(fixed_point));
}

Matrix eval1(const LaurentSymbol& symbol, Complex z) {
  const Complex p[1] = {z};
  return symbol.eval(std::span<const Complex>(p, 1));
}

std::vector<Complex> det_on_circle(const LaurentSymbol& symbol, int samples) {
  if (symbol.num_vars() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "det_on_circle needs a one-variable symbol");
  }
  if (samples < 4) {
    throw Error(ErrorKind::InvalidArgument, "det_on_circle needs at least 4 samples");
  }
  std::vector<Complex> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    out.push_back(eval1(symbol, unit(kTwoPi * k / samples)).determinant());
  }
  return out;
}

}  // namespace qtop
