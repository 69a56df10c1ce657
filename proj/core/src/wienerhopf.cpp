#include "qtop/wienerhopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>


#include "qtop/errors.hpp"
#include "qtop/linalg.hpp"
#include "qtop/winding.hpp"

namespace qtop {
namespace {

// Kernel dimensions are trusted only when no singular value sits between
// kernel_tol and this relative level.
constexpr double kGrayZone = 1e-4;
constexpr int kKernelSizeCap = 512;

void require_one_variable(const LaurentSymbol& s, const char* what) {
  if (s.num_vars() != 1) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " needs a one-variable symbol");
  }
}

bool is_constant(const LaurentSymbol& s) {
  return s.terms().empty() ||
         (s.terms().size() == 1 && s.terms().begin()->first == Exponent{0});
}

Matrix horner(const std::vector<Matrix>& coeffs, Complex x) {
  Matrix acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string format_indices(const std::vector<int>& k) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ']';
  return os.str();
}

int det_samples(const LaurentSymbol& s) {
  return std::max(256, 32 * std::max(1, s.spread(0)) * s.band_dim());
}

void require_invertible_on_circle(const LaurentSymbol& s, const FactorizationOptions& opt) {
  const double scale = std::pow(std::max(1.0, s.coefficient_norm()), s.band_dim());
  const double lo = min_abs_det_on_circle(s, det_samples(s));
  if (lo <= opt.det_tol * scale) {
    throw Error(ErrorKind::SingularOnTorus,
                "symbol is not invertible on the unit circle (min |det| = " +
                    std::to_string(lo) + ")");
  }
}

int det_winding(const LaurentSymbol& s) {
  const auto samples = det_on_circle(s, det_samples(s));
  return winding_number(samples);
}

struct KernelProbe {
  int nullity;
  bool clear;  // no singular values in the gray zone
};

KernelProbe probe_kernel(const LaurentSymbol& s, int size, double tol) {
  const RealVector sv = linalg::singular_values(toeplitz_tall_section(s, size));
  KernelProbe p{0, true};
  if (sv.size() == 0) return p;
  const double top = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double r = sv(i) / top;
    if (r < tol) {
      ++p.nullity;
    } else if (r < kGrayZone) {
      p.clear = false;
    }
  }
  return p;
}

struct Solve {
  std::vector<Matrix> h;
  std::vector<Matrix> c;
  double condition;
};

Solve solve_plus_inverse(const LaurentSymbol& f, int order, double condition_cap) {
  const int n = f.band_dim();
  const Matrix a = toeplitz_tall_section(f, order + 1);
  Matrix rhs = Matrix::Zero(a.rows(), n);
  rhs.topRows(n) = Matrix::Identity(n, n);
  const linalg::SvdSolve svd = linalg::svd_solve(a, rhs);
  const RealVector& sv = svd.singular_values;
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= condition_cap)) {
    throw Error(ErrorKind::IllConditioned,
                "Toeplitz section condition number " + std::to_string(cond) +
                    " exceeds the cap");
  }
  const Matrix& x = svd.x;

  Solve out;
  out.condition = cond;
  out.h.reserve(order + 1);
  for (int k = 0; k <= order; ++k) out.h.push_back(x.block(static_cast<Eigen::Index>(k) * n, 0, n, n));

  // f (sum h_l z^l) has no positive Fourier modes, and its nonpositive modes
  // are f_-; with f a Laurent polynomial, f_- stops at z^{-p}.
  const int p = std::max(0, -f.min_exponent(0));
  out.c.push_back(Matrix::Identity(n, n));
  for (int k = 1; k <= p; ++k) {
    Matrix ck = Matrix::Zero(n, n);
    for (const auto& [e, coeff] : f.terms()) {
      const int l = -k - e[0];
      if (l >= 0 && l <= order) ck += coeff * out.h[l];
    }
    out.c.push_back(std::move(ck));
  }
  return out;
}

double product_residual(const LaurentSymbol& f, const FactorizationResult& r, int grid) {
  double worst = 0.0;
  for (int k = 0; k < grid; ++k) {
    const Complex z = unit(kTwoPi * k / grid);
    worst = std::max(worst, (r.minus_at(z) * r.plus_at(z) - eval1(f, z)).norm());
  }
  return worst;
}

double plus_condition(const FactorizationResult& r) {
  double worst = 1.0;
  for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int k = 0; k < 32; ++k) {
      worst = std::max(worst, linalg::condition_number(r.plus_inverse_at(rho * unit(kTwoPi * k / 32))));
      if (rho == 0.0) break;
    }
  }
  return worst;
}

}  // namespace

Matrix FactorizationResult::minus_at(Complex z) const {
  return horner(minus_coeffs, 1.0 / z);
}

Matrix FactorizationResult::minus_reflected(Complex w) const {
  return horner(minus_coeffs, std::conj(w));
}

Matrix FactorizationResult::plus_inverse_at(Complex z) const {
  return horner(plus_inverse_coeffs, z);
}

Matrix FactorizationResult::plus_at(Complex z) const {
  return plus_inverse_at(z).inverse();
}

Matrix FactorizationResult::extended_at(Complex z) const {
  return minus_reflected(z) * plus_at(z);
}

double min_abs_det_on_circle(const LaurentSymbol& symbol, int samples) {
  require_one_variable(symbol, "min_abs_det_on_circle");
  double lo = std::numeric_limits<double>::infinity();
  for (const Complex d : det_on_circle(symbol, samples)) lo = std::min(lo, std::abs(d));
  return lo;
}

Matrix toeplitz_section(const LaurentSymbol& symbol, int size) {
  require_one_variable(symbol, "toeplitz_section");
  const int n = symbol.band_dim();
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(size) * n, static_cast<Eigen::Index>(size) * n);
  for (const auto& [e, a] : symbol.terms()) {
    for (int k = 0; k < size; ++k) {
      const int j = k + e[0];
      if (j >= 0 && j < size) t.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(k) * n, n, n) = a;
    }
  }
  return t;
}

Matrix toeplitz_tall_section(const LaurentSymbol& symbol, int size) {
  require_one_variable(symbol, "toeplitz_tall_section");
  const int n = symbol.band_dim();
  const int rows = size + std::max(0, symbol.max_exponent(0));
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(rows) * n, static_cast<Eigen::Index>(size) * n);
  for (const auto& [e, a] : symbol.terms()) {
    for (int k = 0; k < size; ++k) {
      const int j = k + e[0];
      if (j >= 0 && j < rows) t.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(k) * n, n, n) = a;
    }
  }
  return t;
}

int toeplitz_kernel_dim(const LaurentSymbol& symbol, const FactorizationOptions& options) {
  require_one_variable(symbol, "toeplitz_kernel_dim");
  if (symbol.is_zero()) {
    throw Error(ErrorKind::SingularOnTorus, "zero symbol");
  }
  const int cap = std::min(options.max_truncation, kKernelSizeCap);
  int size = std::max(8, options.kernel_min_size);
  KernelProbe prev = probe_kernel(symbol, size, options.kernel_tol);
  while (size * 2 <= cap) {
    size *= 2;
    const KernelProbe next = probe_kernel(symbol, size, options.kernel_tol);
    if (prev.clear && next.clear && prev.nullity == next.nullity) return next.nullity;
    prev = next;
  }
  throw Error(ErrorKind::NonConvergent,
              "kernel dimension did not stabilize up to section size " + std::to_string(size));
}

double toeplitz_gap(const LaurentSymbol& symbol, int size) {
  require_one_variable(symbol, "toeplitz_gap");
  return std::min(linalg::sigma_min(toeplitz_tall_section(symbol, size)),
                  linalg::sigma_min(toeplitz_tall_section(symbol.adjoint(), size)));
}

std::vector<int> partial_indices(const LaurentSymbol& symbol, const FactorizationOptions& options) {
  require_one_variable(symbol, "partial_indices");
  const int n = symbol.band_dim();
  require_invertible_on_circle(symbol, options);
  if (is_constant(symbol)) return std::vector<int>(n, 0);

  // Partial indices of a symbol with exponents in [lo, hi] lie in [lo, hi], so
  // shifts by +-(max(hi, -lo) + 1) make every index strictly one-signed.
  const int window = std::max(symbol.max_exponent(0), -symbol.min_exponent(0)) + 1;
  std::vector<int> d(2 * window + 1);
  for (int m = -window; m <= window; ++m) {
    d[m + window] = toeplitz_kernel_dim(symbol.shifted(0, m), options);
  }
  auto dim = [&](int m) { return d[m + window]; };
  if (dim(window) != 0 || dim(-window) - dim(-window + 1) != n) {
    throw Error(ErrorKind::WindowTooSmall,
                "kernel dimensions are not linear at the ends of the shift window");
  }
  auto delta = [&](int m) { return dim(m) - dim(m + 1); };  // #{kappa <= -m-1}
  std::vector<int> kappa;
  for (int k = window - 1; k >= -window + 1; --k) {
    const int count = delta(-k - 1) - delta(-k);
    if (count < 0) {
      throw Error(ErrorKind::NonConvergent, "inconsistent kernel dimensions in shift scan");
    }
    kappa.insert(kappa.end(), count, k);
  }
  const int wind = det_winding(symbol);
  int total = 0;
  for (int k : kappa) total += k;
  if (static_cast<int>(kappa.size()) != n || total != wind) {
    throw Error(ErrorKind::NonConvergent,
                "partial indices " + format_indices(kappa) +
                    " are inconsistent with det winding " + std::to_string(wind));
  }
  return kappa;
}

bool is_canonical(const LaurentSymbol& symbol, const FactorizationOptions& options) {
  require_one_variable(symbol, "is_canonical");
  require_invertible_on_circle(symbol, options);
  if (is_constant(symbol)) return true;
  if (det_winding(symbol) != 0) return false;
  return toeplitz_kernel_dim(symbol, options) == 0;
}

FactorizationResult canonical_factorize(const LaurentSymbol& symbol,
                                        const FactorizationOptions& options) {
  require_one_variable(symbol, "canonical_factorize");
  const int n = symbol.band_dim();
  FactorizationResult out;
  out.partial_indices.assign(n, 0);

  if (is_constant(symbol)) {
    require_invertible_on_circle(symbol, options);
    const Matrix value = symbol.coefficient({0});
    out.plus_inverse_coeffs = {value.inverse()};
    out.minus_coeffs = {Matrix::Identity(n, n)};
    out.truncation_order = 0;
    out.section_condition = linalg::condition_number(value);
    out.plus_condition = out.section_condition;
    out.residual = product_residual(symbol, out, 16);
    return out;
  }

  if (!is_canonical(symbol, options)) {
    const std::vector<int> kappa = partial_indices(symbol, options);
    throw NotCanonicalError(kappa, "symbol has nonzero partial indices " + format_indices(kappa));
  }

  auto attempt = [&](int order) {
    Solve s = solve_plus_inverse(symbol, order, options.condition_cap);
    FactorizationResult r = out;
    r.plus_inverse_coeffs = std::move(s.h);
    r.minus_coeffs = std::move(s.c);
    r.truncation_order = order;
    r.section_condition = s.condition;
    r.residual = product_residual(symbol, r, options.verify_grid);
    return r;
  };

  if (options.truncation > 0) {
    out = attempt(options.truncation);
    out.plus_condition = plus_condition(out);
    return out;
  }

  std::vector<double> history;
  for (int order = options.min_truncation; order <= options.max_truncation; order *= 2) {
    FactorizationResult r = attempt(order);
    history.push_back(r.residual);
    if (r.residual <= options.tol) {
      r.plus_condition = plus_condition(r);
      return r;
    }
    const std::size_t k = history.size();
    if (k >= 3 && history[k - 1] >= history[k - 3]) {
      throw Error(ErrorKind::NonConvergent,
                  "factorization residual " + std::to_string(r.residual) +
                      " stopped decreasing at truncation " + std::to_string(order));
    }
  }
  throw Error(ErrorKind::NonConvergent,
              "factorization residual " + std::to_string(history.back()) +
                  " above tolerance at the truncation cap");
}

FactorizationCheck verify_factorization(const LaurentSymbol& symbol,
                                        const FactorizationResult& result, int grid) {
  FactorizationCheck c{};
  for (int k = 0; k < grid; ++k) {
    const Complex z = unit(kTwoPi * k / grid);
    const Matrix f = eval1(symbol, z);
    const Matrix hz = result.plus_inverse_at(z);
    const Matrix fm = result.minus_at(z);
    c.residual = std::max(c.residual, (fm * hz.inverse() - f).norm());
    c.equation_residual = std::max(c.equation_residual, (f * hz - fm).norm());
  }
  const double h0 = result.plus_inverse_coeffs.front().norm();
  c.tail_ratio = h0 > 0.0 ? result.plus_inverse_coeffs.back().norm() / h0 : 0.0;
  if (result.plus_inverse_coeffs.size() == 1) c.tail_ratio = 0.0;
  c.tail_ok = c.tail_ratio <= 1e-6;
  return c;
}

double RadialScanResult::min_sigma() const {
  return sigma_min.empty() ? 0.0 : *std::min_element(sigma_min.begin(), sigma_min.end());
}

RadialScanResult radial_scan(const LaurentSymbol& symbol, const FactorizationResult& result,
                             const std::vector<double>& radii, int section) {
  require_one_variable(symbol, "radial_scan");
  const int n = symbol.band_dim();
  RadialScanResult out;
  for (double t : radii) {
    if (t < 0.0 || t > 1.0) {
      throw Error(ErrorKind::OutOfDomain, "radii must lie in [0, 1]");
    }
    double s;
    if (t >= 1.0) {
      s = linalg::sigma_min(toeplitz_section(symbol, section));
    } else if (t < 1e-12) {
      // Constant-symbol limit f_-(infinity) f_+(0) = f_+(0).
      s = linalg::sigma_min(result.plus_at(0.0));
    } else {
      const int samples = std::max(256, 4 * section);
      std::vector<Matrix> values;
      values.reserve(samples);
      for (int k = 0; k < samples; ++k) {
        const Complex z = unit(kTwoPi * k / samples);
        values.push_back(result.minus_at(z / t) * result.plus_at(t * z));
      }
      std::vector<std::pair<Exponent, Matrix>> terms;
      for (int j = -(section - 1); j <= section - 1; ++j) {
        Matrix a = Matrix::Zero(n, n);
        for (int k = 0; k < samples; ++k) a += values[k] * unit(-kTwoPi * j * k / samples);
        a /= static_cast<double>(samples);
        if (a.cwiseAbs().maxCoeff() > 1e-15) terms.emplace_back(Exponent{j}, a);
      }
      const LaurentSymbol g = LaurentSymbol::from_terms(1, n, terms);
      s = linalg::sigma_min(toeplitz_section(g, section));
    }
    out.radii.push_back(t);
    out.sigma_min.push_back(s);
  }
  return out;
}

HalfPlaneCertificate certify_half_planes(const LaurentSymbol& symbol, int samples,
                                         const FactorizationOptions& options) {
  if (symbol.num_vars() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "half-plane certificate needs a two-variable symbol");
  }
  HalfPlaneCertificate cert;
  for (int dir = 0; dir < 2; ++dir) {
    const int other = 1 - dir;
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
      const double angle = kTwoPi * k / samples;
      const LaurentSymbol s = symbol.specialize(other, unit(angle));
      bool ok = false;
      try {
        ok = is_canonical(s, options);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularOnTorus) throw;
      }
      if (!ok) {
        std::vector<int> kappa;
        try {
          kappa = partial_indices(s, options);
        } catch (const Error&) {
        }
        cert.fredholm = false;
        cert.failures.push_back({dir, angle, kappa});
        gap = 0.0;
      } else {
        gap = std::min(gap, toeplitz_gap(s));
      }
    }
    cert.min_gap[dir] = gap;
  }
  return cert;
}

}  // namespace qtop
