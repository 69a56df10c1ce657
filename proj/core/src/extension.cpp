#include "qtop/extension.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qtop/errors.hpp"
#include "qtop/parallel.hpp"

namespace qtop {
namespace {

constexpr double kAngleMatch = 1e-9;
constexpr int kGapSection = 16;

double wrap(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Index s with |angle - (phase + 2 pi s / n)| tiny (mod 2 pi), if any.
std::optional<int> match_uniform(double angle, double phase, int n) {
  const double x = wrap(angle - phase) * n / kTwoPi;
  const double r = std::round(x);
  if (std::abs(x - r) > kAngleMatch * n) return std::nullopt;
  return static_cast<int>(r) % n;
}

// Trigonometric interpolation weight of node at offset delta from x.
double trig_weight(double delta, int n) {
  const double half = 0.5 * delta;
  const double s = std::sin(half);
  if (std::abs(s) < 1e-14) return 1.0;
  if (n % 2 == 1) return std::sin(n * half) / (n * s);
  return std::sin(n * half) * std::cos(half) / (n * s);
}

std::string describe_direction(int direction) {
  return direction == 0 ? "z (half-plane in the first variable)"
                        : "w (half-plane in the second variable)";
}

struct SliceOutcome {
  std::optional<FactorizationResult> result;
  ErrorKind kind = ErrorKind::NonConvergent;
  bool not_canonical = false;
  std::vector<int> indices;
  std::string message;
};

SliceOutcome factorize_slice(const LaurentSymbol& slice, const FactorizationOptions& opt) {
  SliceOutcome out;
  try {
    out.result = canonical_factorize(slice, opt);
  } catch (const NotCanonicalError& e) {
    out.not_canonical = true;
    out.kind = ErrorKind::NotCanonical;
    out.indices = e.indices();
    out.message = e.what();
  } catch (const Error& e) {
    out.kind = e.kind();
    out.not_canonical = e.kind() == ErrorKind::SingularOnTorus;
    out.message = e.what();
  }
  return out;
}

[[noreturn]] void raise_slice_failure(const SliceOutcome& o, Chart chart, double angle,
                                      std::optional<double> t) {
  // Chart TD factorizes in w, so its slices certify the half-plane in w.
  const int direction = chart == Chart::TD ? 1 : 0;
  if (o.not_canonical) {
    std::ostringstream msg;
    msg << "half-plane operator in " << describe_direction(direction)
        << " is not invertible at parallel angle " << angle;
    if (t) msg << ", t = " << *t;
    msg << ": " << o.message;
    throw NotFredholmError(direction, angle, t.value_or(0.0), t.has_value(), o.indices, msg.str());
  }
  throw Error(o.kind, o.message);
}

}  // namespace

std::string to_string(Chart chart) { return chart == Chart::TD ? "TD" : "DT"; }

Complex ChartPoint::z() const { return chart == Chart::TD ? unit(theta) : rho * unit(theta); }
Complex ChartPoint::w() const { return chart == Chart::TD ? rho * unit(phi) : unit(phi); }

ChartPoint ChartPoint::conjugated() const {
  ChartPoint p = *this;
  p.theta = wrap(-theta);
  p.phi = wrap(-phi);
  return p;
}

ChartPoint parse_chart_point(std::string_view text) {
  ChartPoint p;
  bool seen_chart = false, seen_theta = false, seen_rho = false, seen_phi = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    const std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "chart point: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (key == "chart") {
      if (value == "TD") {
        p.chart = Chart::TD;
      } else if (value == "DT") {
        p.chart = Chart::DT;
      } else {
        throw Error(ErrorKind::ParseError, "chart point: chart must be TD or DT");
      }
      seen_chart = true;
      continue;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x)) {
      throw Error(ErrorKind::ParseError, "chart point: field '" + key + "' is not a number");
    }
    if (key == "theta") {
      p.theta = x;
      seen_theta = true;
    } else if (key == "rho") {
      p.rho = x;
      seen_rho = true;
    } else if (key == "phi") {
      p.phi = x;
      seen_phi = true;
    } else if (key == "t") {
      p.t = x;
    } else {
      throw Error(ErrorKind::ParseError, "chart point: unknown field '" + key + "'");
    }
  }
  if (!seen_chart || !seen_theta || !seen_rho || !seen_phi) {
    throw Error(ErrorKind::ParseError, "chart point: chart, theta, rho and phi are required");
  }
  return p;
}

std::string format_chart_point(const ChartPoint& p) {
  auto num = [](double x) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
  };
  std::string s = "chart=" + to_string(p.chart) + ";theta=" + num(p.theta) + ";rho=" + num(p.rho) +
                  ";phi=" + num(p.phi);
  if (p.t) s += ";t=" + num(*p.t);
  return s;
}

ChartGrid ChartGrid::uniform(int n_theta, int n_rho, int n_phi) {
  if (n_theta < 1 || n_phi < 1 || n_rho < 2) {
    throw Error(ErrorKind::InvalidArgument, "chart grid needs n_theta, n_phi >= 1 and n_rho >= 2");
  }
  ChartGrid g;
  for (int i = 0; i < n_theta; ++i) g.thetas.push_back(kTwoPi * i / n_theta);
  for (int j = 0; j < n_rho; ++j) g.rhos.push_back(static_cast<double>(j) / (n_rho - 1));
  for (int k = 0; k < n_phi; ++k) g.phis.push_back(kTwoPi * k / n_phi);
  return g;
}

std::vector<Matrix> ChartMap::eval_grid(Chart chart, const ChartGrid& grid,
                                        std::optional<double> t) const {
  std::vector<Matrix> out(grid.size());
  parallel_for(grid.thetas.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.rhos.size(); ++j) {
      for (std::size_t k = 0; k < grid.phis.size(); ++k) {
        out[grid.index(i, j, k)] =
            eval(ChartPoint{chart, grid.thetas[i], grid.rhos[j], grid.phis[k], t});
      }
    }
  });
  return out;
}

LaurentSymbol family_surface(const LaurentSymbol& symbol, int family_var, double t) {
  if (symbol.num_vars() != 3 || family_var < 0 || family_var > 2) {
    throw Error(ErrorKind::DimensionMismatch, "family needs a three-variable symbol");
  }
  return symbol.specialize(family_var, unit(t));
}

ExtendedSymbol::ExtendedSymbol(LaurentSymbol base, int family_var, ExtensionOptions options)
    : base_(std::move(base)), family_var_(family_var), options_(std::move(options)) {}

double ExtendedSymbol::sample_angle(int s) const {
  return wrap(options_.phase + kTwoPi * s / options_.samples_per_circle);
}

double ExtendedSymbol::t_sample(int k) const {
  return wrap(options_.t_phase + kTwoPi * k / options_.t_samples);
}

LaurentSymbol ExtendedSymbol::surface(std::optional<double> t) const {
  if (family_var_ < 0) return base_;
  return family_surface(base_, family_var_, *t);
}

LaurentSymbol ExtendedSymbol::slice_symbol(const LaurentSymbol& surf, Chart chart,
                                           double angle) const {
  // TD fixes z and leaves w; DT fixes w and leaves z.
  return surf.specialize(chart == Chart::TD ? 0 : 1, unit(angle));
}

std::optional<int> ExtendedSymbol::sample_index(double angle) const {
  return match_uniform(angle, options_.phase, options_.samples_per_circle);
}

std::optional<int> ExtendedSymbol::t_index(std::optional<double> t) const {
  if (family_var_ < 0) return 0;
  return match_uniform(*t, options_.t_phase, options_.t_samples);
}

const FactorizationResult& ExtendedSymbol::sample(Chart chart, int s, int t_index) const {
  const auto& table = tables_[chart == Chart::TD ? 0 : 1];
  return table.at(static_cast<std::size_t>(t_index) * options_.samples_per_circle + s);
}

FactorizationResult ExtendedSymbol::interpolated(Chart chart, double angle, int ti) const {
  const int n = options_.samples_per_circle;
  const int dim = band_dim();
  std::size_t h_len = 0, c_len = 0;
  for (int s = 0; s < n; ++s) {
    h_len = std::max(h_len, sample(chart, s, ti).plus_inverse_coeffs.size());
    c_len = std::max(c_len, sample(chart, s, ti).minus_coeffs.size());
  }
  FactorizationResult r;
  r.partial_indices.assign(dim, 0);
  r.plus_inverse_coeffs.assign(h_len, Matrix::Zero(dim, dim));
  r.minus_coeffs.assign(c_len, Matrix::Zero(dim, dim));
  for (int s = 0; s < n; ++s) {
    const double weight = trig_weight(angle - sample_angle(s), n);
    const FactorizationResult& src = sample(chart, s, ti);
    for (std::size_t k = 0; k < src.plus_inverse_coeffs.size(); ++k) {
      r.plus_inverse_coeffs[k] += weight * src.plus_inverse_coeffs[k];
    }
    for (std::size_t k = 0; k < src.minus_coeffs.size(); ++k) {
      r.minus_coeffs[k] += weight * src.minus_coeffs[k];
    }
  }
  r.truncation_order = static_cast<int>(h_len) - 1;
  return r;
}

FactorizationResult ExtendedSymbol::slice_factorization(Chart chart, double angle,
                                                        std::optional<double> t) const {
  if (family_var_ >= 0 && !t) {
    throw Error(ErrorKind::OutOfDomain, "family extension needs a parameter value t");
  }
  const std::optional<int> ti = t_index(t);
  if (ti) {
    if (const auto s = sample_index(angle)) return sample(chart, *s, *ti);
    if (options_.trig_interpolation) return interpolated(chart, angle, *ti);
  }
  const SliceOutcome o = factorize_slice(slice_symbol(surface(t), chart, angle), options_.factorization);
  if (!o.result) raise_slice_failure(o, chart, angle, t);
  return *o.result;
}

void ExtendedSymbol::check_point(const ChartPoint& p) const {
  if (!std::isfinite(p.theta) || !std::isfinite(p.phi) || !std::isfinite(p.rho) ||
      p.rho < -1e-12 || p.rho > 1.0 + 1e-12) {
    throw Error(ErrorKind::OutOfDomain, "chart point outside the bidisk boundary");
  }
  if (has_parameter() != p.t.has_value()) {
    throw Error(ErrorKind::OutOfDomain, has_parameter() ? "family extension needs t"
                                                        : "extension has no family parameter");
  }
  if (p.t && !std::isfinite(*p.t)) throw Error(ErrorKind::OutOfDomain, "t must be finite");
}

Matrix ExtendedSymbol::eval(const ChartPoint& p) const {
  check_point(p);
  const double rho = std::clamp(p.rho, 0.0, 1.0);
  if (p.chart == Chart::TD) {
    return slice_factorization(Chart::TD, p.theta, p.t).extended_at(rho * unit(p.phi));
  }
  return slice_factorization(Chart::DT, p.phi, p.t).extended_at(rho * unit(p.theta));
}

std::vector<Matrix> ExtendedSymbol::eval_grid(Chart chart, const ChartGrid& grid,
                                              std::optional<double> t) const {
  check_point(ChartPoint{chart, 0.0, 0.0, 0.0, t});
  for (double r : grid.rhos) {
    if (r < -1e-12 || r > 1.0 + 1e-12) throw Error(ErrorKind::OutOfDomain, "radius outside [0, 1]");
  }
  std::vector<Matrix> out(grid.size());
  if (chart == Chart::TD) {
    parallel_for(grid.thetas.size(), [&](std::size_t i) {
      const FactorizationResult f = slice_factorization(Chart::TD, grid.thetas[i], t);
      for (std::size_t j = 0; j < grid.rhos.size(); ++j) {
        for (std::size_t k = 0; k < grid.phis.size(); ++k) {
          out[grid.index(i, j, k)] = f.extended_at(grid.rhos[j] * unit(grid.phis[k]));
        }
      }
    });
  } else {
    parallel_for(grid.phis.size(), [&](std::size_t k) {
      const FactorizationResult f = slice_factorization(Chart::DT, grid.phis[k], t);
      for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
        for (std::size_t j = 0; j < grid.rhos.size(); ++j) {
          out[grid.index(i, j, k)] = f.extended_at(grid.rhos[j] * unit(grid.thetas[i]));
        }
      }
    });
  }
  return out;
}

bool ExtendedSymbol::interpolation_accurate() const {
  return interpolation_error_ <= options_.seam_tol * std::max(1.0, base_.coefficient_norm());
}

namespace {

void fill_tables(ExtendedSymbol& ext, std::vector<FactorizationResult> (&tables)[2],
                 const LaurentSymbol& base, int family_var, const ExtensionOptions& opt,
                 double& max_residual) {
  const int n = opt.samples_per_circle;
  const int nt = family_var >= 0 ? opt.t_samples : 1;
  const std::size_t per_chart = static_cast<std::size_t>(n) * nt;

  std::vector<LaurentSymbol> surfaces;
  for (int k = 0; k < nt; ++k) {
    surfaces.push_back(family_var >= 0 ? family_surface(base, family_var, ext.t_sample(k)) : base);
  }
  std::vector<SliceOutcome> outcomes(2 * per_chart);
  parallel_for(outcomes.size(), [&](std::size_t job) {
    const int c = static_cast<int>(job / per_chart);
    const std::size_t rest = job % per_chart;
    const int k = static_cast<int>(rest / n);
    const int s = static_cast<int>(rest % n);
    const LaurentSymbol slice = surfaces[k].specialize(c == 0 ? 0 : 1, unit(ext.sample_angle(s)));
    outcomes[job] = factorize_slice(slice, opt.factorization);
  });

  max_residual = 0.0;
  for (std::size_t job = 0; job < outcomes.size(); ++job) {
    const Chart chart = job < per_chart ? Chart::TD : Chart::DT;
    const std::size_t rest = job % per_chart;
    SliceOutcome& o = outcomes[job];
    if (!o.result) {
      const double angle = ext.sample_angle(static_cast<int>(rest % n));
      if (family_var < 0) raise_slice_failure(o, chart, angle, std::nullopt);
      raise_slice_failure(o, chart, angle, ext.t_sample(static_cast<int>(rest / n)));
    }
    max_residual = std::max(max_residual, o.result->residual);
    tables[job < per_chart ? 0 : 1].push_back(std::move(*o.result));
  }
}

double measure_seam(const ExtendedSymbol& ext, const LaurentSymbol& base, int family_var,
                    const ExtensionOptions& opt) {
  const int n = opt.samples_per_circle;
  const int stride = std::max(1, n / 16);
  ChartGrid g;
  for (int s = 0; s < n; s += stride) {
    g.thetas.push_back(ext.sample_angle(s));
    g.phis.push_back(ext.sample_angle(s));
  }
  g.rhos = {1.0};
  const int nt = family_var >= 0 ? opt.t_samples : 1;
  double worst = 0.0;
  for (int k = 0; k < nt; ++k) {
    std::optional<double> t;
    if (family_var >= 0) t = ext.t_sample(k);
    const LaurentSymbol surf = family_var >= 0 ? family_surface(base, family_var, *t) : base;
    const auto td = ext.eval_grid(Chart::TD, g, t);
    const auto dt = ext.eval_grid(Chart::DT, g, t);
    for (std::size_t i = 0; i < g.thetas.size(); ++i) {
      for (std::size_t m = 0; m < g.phis.size(); ++m) {
        const Matrix f = surf.eval({unit(g.thetas[i]), unit(g.phis[m])});
        const std::size_t idx = g.index(i, 0, m);
        worst = std::max({worst, (td[idx] - f).norm(), (dt[idx] - f).norm()});
      }
    }
  }
  return worst;
}

double measure_interpolation(const ExtendedSymbol& ext, const ExtensionOptions& opt) {
  const int n = opt.samples_per_circle;
  std::optional<double> t;
  if (ext.has_parameter()) t = ext.t_sample(0);
  double worst = 0.0;
  for (Chart chart : {Chart::TD, Chart::DT}) {
    for (int q = 0; q < 4; ++q) {
      const double angle = ext.sample_angle(q * n / 4) + kPi / n;
      const FactorizationResult fast = ext.slice_factorization(chart, angle, t);
      const SliceOutcome o = factorize_slice(
          (t ? family_surface(ext.base(), ext.family_var(), *t) : ext.base())
              .specialize(chart == Chart::TD ? 0 : 1, unit(angle)),
          opt.factorization);
      if (!o.result) return std::numeric_limits<double>::infinity();
      for (double rho : {0.0, 0.5, 1.0}) {
        for (int k = 0; k < 8; ++k) {
          const Complex x = rho * unit(kTwoPi * k / 8);
          worst = std::max(worst, (fast.extended_at(x) - o.result->extended_at(x)).norm());
        }
      }
    }
  }
  return worst;
}

void finish(ExtendedSymbol& ext, const LaurentSymbol& base, int family_var,
            const ExtensionOptions& opt, double& seam_error, double& interpolation_error) {
  seam_error = measure_seam(ext, base, family_var, opt);
  const double allowed = opt.seam_tol * std::max(1.0, base.coefficient_norm());
  if (!(seam_error <= allowed)) {
    throw Error(ErrorKind::NonConvergent,
                "extended symbol misses the base symbol on the seam by " + std::to_string(seam_error));
  }
  if (opt.trig_interpolation) interpolation_error = measure_interpolation(ext, opt);
}

void validate(const ExtensionOptions& opt) {
  if (opt.samples_per_circle < 4 || opt.t_samples < 2 || opt.gap_slices < 1) {
    throw Error(ErrorKind::InvalidArgument, "too few samples per circle");
  }
}

}  // namespace

ExtendedSymbol build_extended(const LaurentSymbol& symbol, const ExtensionOptions& options) {
  if (symbol.num_vars() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "extension needs a two-variable symbol");
  }
  validate(options);
  ExtendedSymbol ext(symbol, -1, options);
  fill_tables(ext, ext.tables_, symbol, -1, options, ext.max_residual_);
  finish(ext, symbol, -1, options, ext.seam_error_, ext.interpolation_error_);
  return ext;
}

ExtendedSymbol build_extended_family(const LaurentSymbol& symbol, int family_var,
                                     const ExtensionOptions& options) {
  if (symbol.num_vars() != 3 || family_var < 0 || family_var > 2) {
    throw Error(ErrorKind::DimensionMismatch, "family extension needs a three-variable symbol");
  }
  validate(options);
  ExtendedSymbol ext(symbol, family_var, options);
  fill_tables(ext, ext.tables_, symbol, family_var, options, ext.max_residual_);

  const FamilyGapScan scan = scan_family_gap(symbol, family_var, options.t_samples, options);
  if (scan.closed) {
    std::ostringstream msg;
    msg << "half-plane operator in " << describe_direction(scan.direction)
        << " loses invertibility near t = " << scan.argmin_t << " (gap " << scan.min_gap << ")";
    throw NotFredholmError(scan.direction, scan.parallel_angle, scan.argmin_t, true, scan.indices,
                           msg.str());
  }
  finish(ext, symbol, family_var, options, ext.seam_error_, ext.interpolation_error_);
  return ext;
}

Matrix eval_extended(const ChartMap& ext, const ChartPoint& p) { return ext.eval(p); }

FamilyGapScan scan_family_gap(const LaurentSymbol& symbol, int family_var, int t_samples,
                              const ExtensionOptions& options) {
  if (t_samples < 3) throw Error(ErrorKind::InvalidArgument, "gap scan needs at least 3 samples");
  const int slices = options.gap_slices;
  auto gap_at = [&](double t) {
    const LaurentSymbol surf = family_surface(symbol, family_var, t);
    double g = std::numeric_limits<double>::infinity();
    for (int dir = 0; dir < 2; ++dir) {
      for (int k = 0; k < slices; ++k) {
        const LaurentSymbol s = surf.specialize(1 - dir, unit(kTwoPi * k / slices));
        g = std::min(g, toeplitz_gap(s, kGapSection));
      }
    }
    return g;
  };

  FamilyGapScan scan;
  scan.t.resize(t_samples);
  scan.gap.resize(t_samples);
  for (int k = 0; k < t_samples; ++k) scan.t[k] = wrap(options.t_phase + kTwoPi * k / t_samples);
  parallel_for(t_samples, [&](std::size_t k) { scan.gap[k] = gap_at(scan.t[k]); });

  const double top = *std::max_element(scan.gap.begin(), scan.gap.end());
  const auto lowest = std::min_element(scan.gap.begin(), scan.gap.end());
  scan.min_gap = *lowest;
  scan.argmin_t = scan.t[lowest - scan.gap.begin()];

  // Golden-section refinement of the pronounced local minima.
  const double spacing = kTwoPi / t_samples;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int k = 0; k < t_samples; ++k) {
    const double g = scan.gap[k];
    const double prev = scan.gap[(k + t_samples - 1) % t_samples];
    const double next = scan.gap[(k + 1) % t_samples];
    if (!(g <= prev && g <= next && g < 0.5 * top)) continue;
    double a = scan.t[k] - spacing, b = scan.t[k] + spacing;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double g1 = gap_at(x1), g2 = gap_at(x2);
    for (int it = 0; it < 48 && b - a > 1e-10; ++it) {
      if (g1 < g2) {
        b = x2;
        x2 = x1;
        g2 = g1;
        x1 = b - ratio * (b - a);
        g1 = gap_at(x1);
      } else {
        a = x1;
        x1 = x2;
        g1 = g2;
        x2 = a + ratio * (b - a);
        g2 = gap_at(x2);
      }
    }
    const double tm = g1 < g2 ? x1 : x2;
    const double gm = std::min(g1, g2);
    if (gm < scan.min_gap) {
      scan.min_gap = gm;
      scan.argmin_t = wrap(tm);
    }
  }

  // Decide by canonicity at the minimizer, not by a gap threshold.
  const LaurentSymbol surf = family_surface(symbol, family_var, scan.argmin_t);
  for (int dir = 0; dir < 2 && !scan.closed; ++dir) {
    for (int k = 0; k < slices; ++k) {
      const double angle = kTwoPi * k / slices;
      const LaurentSymbol s = surf.specialize(1 - dir, unit(angle));
      bool ok = false;
      try {
        ok = is_canonical(s, options.factorization);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularOnTorus) throw;
      }
      if (!ok) {
        scan.closed = true;
        scan.direction = dir;
        scan.parallel_angle = angle;
        try {
          scan.indices = partial_indices(s, options.factorization);
        } catch (const Error&) {
        }
        break;
      }
    }
  }
  return scan;
}

MatrixCheck check_hermitian(const ChartMap& ext, int grid, double tol, bool skew,
                            std::optional<double> t) {
  MatrixCheck c;
  const ChartGrid g = ChartGrid::uniform(grid, grid, grid);
  const double sign = skew ? -1.0 : 1.0;
  for (Chart chart : {Chart::TD, Chart::DT}) {
    for (const Matrix& v : ext.eval_grid(chart, g, t)) {
      c.max_violation = std::max(c.max_violation, (v - sign * v.adjoint()).norm());
    }
  }
  c.pass = c.max_violation <= tol;
  return c;
}

MatrixCheck check_equivariance(const ChartMap& ext, const AZClassSpec& spec, int grid, double tol,
                               std::optional<double> t) {
  if (spec.antiunitary_kind == Antiunitary::Quaternionic && ext.band_dim() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "quaternionic classes need an even band dimension");
  }
  MatrixCheck c;
  if (spec.relations.empty()) return c;
  const ChartGrid g = ChartGrid::uniform(grid, grid, grid);
  const Matrix chirality = Matrix::Identity(ext.band_dim(), ext.band_dim());
  for (Chart chart : {Chart::TD, Chart::DT}) {
    const auto values = ext.eval_grid(chart, g, t);
    // Uniform angles are closed under negation: index i maps to (n - i) mod n.
    for (int i = 0; i < grid; ++i) {
      for (std::size_t j = 0; j < g.rhos.size(); ++j) {
        for (int k = 0; k < grid; ++k) {
          const Matrix& x = values[g.index(i, j, k)];
          const Matrix& x_nu = values[g.index((grid - i) % grid, j, (grid - k) % grid)];
          for (Relation r : spec.relations) {
            c.max_violation = std::max(c.max_violation, relation_residual(r, x, x_nu, chirality));
          }
        }
      }
    }
  }
  c.pass = c.max_violation <= tol;
  return c;
}

void write_extended_csv(std::ostream& out, const ChartMap& ext, const ChartGrid& grid,
                        std::optional<double> t) {
  out << "chart,theta,rho,phi";
  if (t) out << ",t";
  out << ",entry_row,entry_col,re,im\n";
  out << std::setprecision(17);
  for (Chart chart : {Chart::TD, Chart::DT}) {
    const auto values = ext.eval_grid(chart, grid, t);
    for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
      for (std::size_t j = 0; j < grid.rhos.size(); ++j) {
        for (std::size_t k = 0; k < grid.phis.size(); ++k) {
          const Matrix& v = values[grid.index(i, j, k)];
          for (Eigen::Index r = 0; r < v.rows(); ++r) {
            for (Eigen::Index col = 0; col < v.cols(); ++col) {
              out << to_string(chart) << ',' << grid.thetas[i] << ',' << grid.rhos[j] << ','
                  << grid.phis[k];
              if (t) out << ',' << *t;
              out << ',' << r << ',' << col << ',' << v(r, col).real() << ',' << v(r, col).imag()
                  << '\n';
            }
          }
        }
      }
    }
  }
}

}  // namespace qtop
