#include "qtop/invariants.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <mutex>

#include "qtop/errors.hpp"
#include "qtop/parallel.hpp"

namespace qtop {
namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Periodic spectral differentiation matrix on n equispaced nodes.
Eigen::MatrixXd spectral_derivative(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double x = (j - k) * kPi / n;
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = n % 2 == 0 ? 0.5 * sign / std::tan(x) : 0.5 * sign / std::sin(x);
    }
  }
  return d;
}

// Fourth-order first-derivative stencil at node j of n, spacing h.
// Returns (offset of first node, five weights).
std::pair<int, std::array<double, 5>> radial_stencil(int j, int n, double h) {
  const double s = 1.0 / (12.0 * h);
  if (j == 0) return {0, {-25 * s, 48 * s, -36 * s, 16 * s, -3 * s}};
  if (j == 1) return {0, {-3 * s, -10 * s, 18 * s, -6 * s, 1 * s}};
  if (j == n - 2) return {n - 5, {-1 * s, 6 * s, -18 * s, 10 * s, 3 * s}};
  if (j == n - 1) return {n - 5, {3 * s, -16 * s, 36 * s, -48 * s, 25 * s}};
  return {j - 2, {1 * s, -8 * s, 0.0, 8 * s, -1 * s}};
}

// Integral over one chart of 3 tr(A_theta [A_rho, A_phi]), A = g^{-1} dg,
// in the coordinates (theta, rho, phi).
Complex chart_integral(const std::vector<Matrix>& values, int nt, int nr, int np, int dim) {
  const int e2 = dim * dim;
  const std::size_t points = static_cast<std::size_t>(nt) * nr * np;
  std::vector<Complex> f(points * e2);
  for (std::size_t p = 0; p < points; ++p) {
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) f[p * e2 + r * dim + c] = values[p](r, c);
    }
  }
  auto at = [&](std::vector<Complex>& v, int i, int j, int k) {
    return v.data() + ((static_cast<std::size_t>(i) * nr + j) * np + k) * e2;
  };

  std::vector<Complex> ft(f.size()), fp(f.size()), fr(f.size());
  {
    const Eigen::MatrixXcd dt = spectral_derivative(nt).cast<Complex>();
    Eigen::Map<const RowMajor> src(f.data(), nt, static_cast<Eigen::Index>(nr) * np * e2);
    Eigen::Map<RowMajor> dst(ft.data(), nt, static_cast<Eigen::Index>(nr) * np * e2);
    dst.noalias() = dt * src;
  }
  const Eigen::MatrixXcd dp = spectral_derivative(np).cast<Complex>();
  const double h = 1.0 / (nr - 1);
  parallel_for(nt, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < nr; ++j) {
      Eigen::Map<const RowMajor> src(at(f, i, j, 0), np, e2);
      Eigen::Map<RowMajor> dst(at(fp, i, j, 0), np, e2);
      dst.noalias() = dp * src;
      const auto [first, w] = radial_stencil(j, nr, h);
      for (int k = 0; k < np; ++k) {
        Complex* out = at(fr, i, j, k);
        for (int e = 0; e < e2; ++e) out[e] = 0.0;
        for (int q = 0; q < 5; ++q) {
          if (w[q] == 0.0) continue;
          const Complex* in = at(f, i, first + q, k);
          for (int e = 0; e < e2; ++e) out[e] += w[q] * in[e];
        }
      }
    }
  });

  std::vector<double> simpson(nr);
  for (int j = 0; j < nr; ++j) {
    simpson[j] = (j == 0 || j == nr - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    simpson[j] *= h / 3.0;
  }
  const double angular = (kTwoPi / nt) * (kTwoPi / np);

  std::vector<Complex> partial(nt, 0.0);
  parallel_for(nt, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    Complex acc = 0.0;
    using RM = Eigen::Map<const RowMajor>;
    for (int j = 0; j < nr; ++j) {
      for (int k = 0; k < np; ++k) {
        const Matrix g = RM(at(f, i, j, k), dim, dim);
        const Eigen::PartialPivLU<Matrix> lu(g);
        const Matrix at_ = lu.solve(Matrix(RM(at(ft, i, j, k), dim, dim)));
        const Matrix ar = lu.solve(Matrix(RM(at(fr, i, j, k), dim, dim)));
        const Matrix ap = lu.solve(Matrix(RM(at(fp, i, j, k), dim, dim)));
        acc += 3.0 * (at_ * (ar * ap - ap * ar)).trace() * simpson[j];
      }
    }
    partial[i] = acc * angular;
  });
  Complex total = 0.0;
  for (const Complex& p : partial) total += p;
  return total;
}

struct Evaluation {
  double raw;
  double imag;
  double td;
  double dt;
};

Evaluation evaluate(const ChartMap& map, int nt, int nr, int np, std::optional<double> t, int sign) {
  const ChartGrid grid = ChartGrid::uniform(nt, nr, np);
  const double norm = 1.0 / (24.0 * kPi * kPi);
  // The DT chart enters with the opposite orientation.
  const Complex td = chart_integral(map.eval_grid(Chart::TD, grid, t), nt, nr, np, map.band_dim()) * norm;
  const Complex dt = -chart_integral(map.eval_grid(Chart::DT, grid, t), nt, nr, np, map.band_dim()) * norm;
  return {sign * (td + dt).real(), sign * (td + dt).imag(), sign * td.real(), sign * dt.real()};
}

std::once_flag g_calibration_once;
std::atomic<int> g_orientation{0};

}  // namespace

ClosedFormMap bott_generator() {
  return ClosedFormMap(2, [](Complex z, Complex w) {
    Matrix g(2, 2);
    g << z, -std::conj(w), w, std::conj(z);
    return g;
  });
}

int calibrate_orientation() {
  std::call_once(g_calibration_once, [] {
    W3Options o;
    o.calibrated = false;
    const W3Result r = w3(bott_generator(), o);
    if (std::abs(std::abs(r.raw_value) - 1.0) > 0.1) {
      throw Error(ErrorKind::CalibrationFailed,
                  "Bott generator integrates to " + std::to_string(r.raw_value));
    }
    g_orientation = r.raw_value > 0.0 ? 1 : -1;
  });
  return g_orientation.load();
}

W3Result w3(const ChartMap& map, const W3Options& options) {
  if (options.n_theta < 4 || options.n_phi < 4 || options.n_rho < 5 || options.n_rho % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "w3 grid needs n_theta, n_phi >= 4 and odd n_rho >= 5");
  }
  if (map.has_parameter() != options.t.has_value()) {
    throw Error(ErrorKind::InvalidArgument, "w3 needs t exactly when the map is a family");
  }
  const int sign = options.calibrated ? calibrate_orientation() : 1;

  W3Result r;
  r.orientation = sign;
  int nt = options.n_theta, nr = options.n_rho, np = options.n_phi;
  for (int level = 0;; ++level) {
    const Evaluation e = evaluate(map, nt, nr, np, options.t, sign);
    r.raw_value = e.raw;
    r.imag_part = e.imag;
    r.chart_td = e.td;
    r.chart_dt = e.dt;
    r.rounded = static_cast<int>(std::lround(e.raw));
    r.residual = std::abs(e.raw - r.rounded);
    r.n_theta = nt;
    r.n_rho = nr;
    r.n_phi = np;
    r.history.push_back({nt, nr, np, e.raw, r.residual});
    if (!options.refine || r.residual < options.threshold || level >= options.max_refinements) break;
    nt *= 2;
    np *= 2;
    nr = 2 * (nr - 1) + 1;
  }
  const std::size_t n = r.history.size();
  if (options.refine && r.residual >= options.threshold && n >= 2 &&
      r.history[n - 1].residual >= r.history[n - 2].residual) {
    throw Error(ErrorKind::NonConvergent,
                "winding number residual " + std::to_string(r.residual) +
                    " does not decrease under grid refinement");
  }
  return r;
}

std::string gapless_group_2d(AZLabel label) {
  switch (label) {
    case AZLabel::AIII:
    case AZLabel::BDI:
    case AZLabel::CII:
      return "Z";
    case AZLabel::DIII:
    case AZLabel::D:
      return "Z2";
    default:
      return "0";
  }
}

GappedInvariantReport gapped_invariant_report(const LaurentSymbol& hamiltonian,
                                              const AZClassSpec& spec,
                                              const ReportOptions& options) {
  if (hamiltonian.num_vars() != 2) {
    throw Error(ErrorKind::InvalidArgument,
                "gapped invariant report covers two-variable symbols; use spectral flow for families");
  }
  GappedInvariantReport rep;
  rep.label = spec.label;
  rep.degree = spec.degree;
  rep.target_group = gapless_group_2d(spec.label);
  rep.symmetry = check_symmetry(hamiltonian, spec);
  if (!rep.symmetry.pass()) {
    throw Error(ErrorKind::SymmetryViolation,
                "symbol violates the relations of class " + to_string(spec.label) + " (max " +
                    std::to_string(rep.symmetry.max_violation()) + ")");
  }

  const LaurentSymbol x = spec.chiral ? chiral_block(hamiltonian) : hamiltonian;
  rep.certificate = certify_half_planes(x, options.certificate_samples, options.extension.factorization);
  if (!rep.certificate.fredholm) {
    const SliceFailure& f = rep.certificate.failures.front();
    throw NotFredholmError(f.direction, f.angle, 0.0, false, f.indices,
                           "half-plane operator is not invertible; no gapped invariant");
  }

  const ExtendedSymbol ext = build_extended(x, options.extension);
  if (spec.chiral) {
    rep.equivariance = check_equivariance(ext, spec, options.check_grid, options.check_tol);
    rep.w3 = w3(ext, options.w3);
    rep.invariant = rep.w3->rounded;
    rep.invariant_tag = spec.label == AZLabel::AIII ? "W3(h^E)" : "complex shadow W3(h^E)";
    if (spec.label != AZLabel::AIII) {
      rep.notes.push_back("integer is the complex-forgetful value; the real invariant lives in " +
                          rep.target_group);
    }
  } else {
    rep.hermitian = check_hermitian(ext, options.check_grid, options.check_tol);
    rep.equivariance = check_equivariance(ext, spec, options.check_grid, options.check_tol);
    rep.invariant_tag = "not computed (non-Z target)";
    if (spec.label == AZLabel::A) {
      rep.notes.push_back("the gapless group of class A in two dimensions is trivial");
    }
  }
  return rep;
}

}  // namespace qtop
