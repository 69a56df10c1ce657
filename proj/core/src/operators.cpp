#include "qtop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtop/errors.hpp"
#include "qtop/extension.hpp"
#include "qtop/linalg.hpp"
#include "qtop/parallel.hpp"

namespace qtop {
namespace {

int positive_reach(const LaurentSymbol& s) {
  int reach = 0;
  for (int v = 0; v < s.num_vars(); ++v) {
    if (!s.is_zero()) reach = std::max(reach, s.max_exponent(v));
  }
  return reach;
}

double symbol_scale(const LaurentSymbol& s) { return std::max(1.0, s.coefficient_norm()); }

void require_hermitian(const LaurentSymbol& h) {
  const double defect = coefficient_distance(h, h.adjoint());
  if (defect > 1e-12 * symbol_scale(h)) {
    throw Error(ErrorKind::NotHermitian,
                "symbol is not hermitian (coefficient defect " + std::to_string(defect) + ")");
  }
}

// (1 x Pi) psi for site-major vectors.
Vector apply_onsite(const Matrix& pi, const Vector& psi) {
  const Eigen::Index n = pi.rows();
  Vector out(psi.size());
  for (Eigen::Index s = 0; s < psi.size() / n; ++s) out.segment(s * n, n) = pi * psi.segment(s * n, n);
  return out;
}

// Weight of psi on quarter sites (m, n) with m < lm and n < ln.
double region_weight(const Vector& psi, int extent1, int band_dim, int lm, int ln) {
  double w = 0.0;
  for (int m = 0; m < lm; ++m) {
    for (int n = 0; n < ln; ++n) {
      w += psi.segment(static_cast<Eigen::Index>(m * extent1 + n) * band_dim, band_dim).squaredNorm();
    }
  }
  return w;
}

}  // namespace

Geometry Geometry::segment(int size) {
  if (size < 1) throw Error(ErrorKind::InvalidArgument, "segment size must be positive");
  Geometry g;
  g.kind = GeometryKind::Segment;
  g.extent[0] = size;
  g.extent[1] = 1;
  return g;
}

Geometry Geometry::half_plane(int direction, int l_par, int l_perp) {
  if (direction < 0 || direction > 1 || l_par < 1 || l_perp < 1) {
    throw Error(ErrorKind::InvalidArgument, "invalid half-plane geometry");
  }
  Geometry g;
  g.kind = GeometryKind::HalfPlane;
  g.direction = direction;
  g.extent[direction] = l_perp;
  g.extent[1 - direction] = l_par;
  return g;
}

Geometry Geometry::quarter(int size) {
  if (size < 1) throw Error(ErrorKind::InvalidArgument, "quarter size must be positive");
  Geometry g;
  g.kind = GeometryKind::Quarter;
  g.extent[0] = g.extent[1] = size;
  return g;
}

Geometry Geometry::padded(int pad) const {
  Geometry g = *this;
  for (int v = 0; v < num_vars(); ++v) {
    if (!periodic(v)) g.extent[v] += pad;
  }
  return g;
}

TruncatedOperator assemble(const LaurentSymbol& symbol, const Geometry& geometry,
                           const AssemblyOptions& options) {
  if (symbol.num_vars() != geometry.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "geometry does not match the number of symbol variables");
  }
  const int n = symbol.band_dim();
  TruncatedOperator op;
  op.input = geometry;
  op.output = geometry.padded(std::max(0, options.pad));
  op.band_dim = n;
  const long rows = static_cast<long>(op.output.sites()) * n;
  const long cols = static_cast<long>(op.input.sites()) * n;
  if (std::max(rows, cols) > options.dense_cap) {
    throw Error(ErrorKind::SizeOverflow, "truncation of dimension " + std::to_string(std::max(rows, cols)) +
                                             " exceeds the dense cap " + std::to_string(options.dense_cap));
  }
  op.matrix = Matrix::Zero(rows, cols);
  const int in0 = geometry.extent[0], in1 = geometry.extent[1];
  const int out0 = op.output.extent[0], out1 = op.output.extent[1];
  for (const auto& [e, a] : symbol.terms()) {
    const int e0 = e[0];
    const int e1 = e.size() > 1 ? e[1] : 0;
    for (int m = 0; m < in0; ++m) {
      int xm = m + e0;
      if (geometry.periodic(0)) {
        xm = ((xm % out0) + out0) % out0;
      } else if (xm < 0 || xm >= out0) {
        continue;
      }
      for (int k = 0; k < in1; ++k) {
        int xn = k + e1;
        if (geometry.periodic(1)) {
          xn = ((xn % out1) + out1) % out1;
        } else if (xn < 0 || xn >= out1) {
          continue;
        }
        const Eigen::Index row = static_cast<Eigen::Index>(xm * out1 + xn) * n;
        const Eigen::Index col = static_cast<Eigen::Index>(m * in1 + k) * n;
        op.matrix.block(row, col, n, n) += a;
      }
    }
  }
  return op;
}

int kernel_dim(const TruncatedOperator& op, double tol) {
  const Matrix& a = op.matrix;
  if (a.cols() == 0) return 0;
  int missing = a.cols() > a.rows() ? static_cast<int>(a.cols() - a.rows()) : 0;
  const RealVector sv = linalg::singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return static_cast<int>(a.cols());
  return missing + linalg::numerical_nullity(sv, tol);
}

IndexReport numerical_index(const LaurentSymbol& symbol, const std::vector<int>& sizes,
                            const IndexOptions& options) {
  if (sizes.empty()) throw Error(ErrorKind::InvalidArgument, "numerical index needs at least one size");
  const int d = symbol.num_vars();
  if (d != 1 && d != 2) throw Error(ErrorKind::DimensionMismatch, "index needs one or two variables");

  if (d == 2 && options.certify) {
    const HalfPlaneCertificate cert = certify_half_planes(symbol, options.certificate_samples);
    if (!cert.fredholm) {
      const SliceFailure& f = cert.failures.front();
      throw NotFredholmError(f.direction, f.angle, 0.0, false, f.indices,
                             "half-plane operator is not invertible; the truncation index is meaningless");
    }
  }
  if (d == 1) {
    const int samples = std::max(256, 32 * std::max(1, symbol.spread(0)));
    if (min_abs_det_on_circle(symbol, samples) <= 1e-10 * std::pow(symbol_scale(symbol), symbol.band_dim())) {
      throw NotFredholmError(0, 0.0, 0.0, false, {}, "symbol is not invertible on the circle");
    }
  }

  const LaurentSymbol adj = symbol.adjoint();
  AssemblyOptions fwd{positive_reach(symbol), options.dense_cap};
  AssemblyOptions bwd{positive_reach(adj), options.dense_cap};
  IndexReport rep;
  for (int size : sizes) {
    const Geometry g = d == 1 ? Geometry::segment(size) : Geometry::quarter(size);
    const int k = kernel_dim(assemble(symbol, g, fwd), options.tol);
    const int c = kernel_dim(assemble(adj, g, bwd), options.tol);
    rep.per_size.push_back({size, k, c, k - c});
  }
  rep.index = rep.per_size.front().index;
  for (const auto& s : rep.per_size) {
    if (s.index != rep.index) {
      std::ostringstream msg;
      msg << "truncation index differs across sizes:";
      for (const auto& t : rep.per_size) msg << " L=" << t.size << ":" << t.index;
      throw Error(ErrorKind::Unstable, msg.str());
    }
  }
  return rep;
}

HalfPlaneGap half_plane_gap(const LaurentSymbol& symbol, int direction, int l_par, int l_perp,
                            int dense_cap) {
  if (symbol.num_vars() != 2) throw Error(ErrorKind::DimensionMismatch, "half-plane gap needs two variables");
  if (l_perp < 2) throw Error(ErrorKind::InvalidArgument, "l_perp must be at least 2");
  std::vector<int> sizes;
  for (int s : {l_perp / 4, l_perp / 2, l_perp}) {
    if (s >= 1 && (sizes.empty() || s > sizes.back())) sizes.push_back(s);
  }
  const LaurentSymbol adj = symbol.adjoint();
  HalfPlaneGap out;
  for (int s : sizes) {
    const Geometry g = Geometry::half_plane(direction, l_par, s);
    const double a = linalg::sigma_min(assemble(symbol, g, {positive_reach(symbol), dense_cap}).matrix);
    const double b = linalg::sigma_min(assemble(adj, g, {positive_reach(adj), dense_cap}).matrix);
    out.perp_sizes.push_back(s);
    out.sigma.push_back(std::min(a, b));
  }
  out.gap = out.sigma.back();
  out.closing = out.sigma.size() >= 3;
  for (std::size_t k = 1; k < out.sigma.size(); ++k) {
    if (!(out.sigma[k] < 0.9 * out.sigma[k - 1])) out.closing = false;
  }
  return out;
}

CornerSpectrum corner_spectrum(const LaurentSymbol& hamiltonian, int size,
                               const std::optional<Matrix>& chirality,
                               const CornerOptions& options) {
  if (hamiltonian.num_vars() != 2) throw Error(ErrorKind::DimensionMismatch, "corner spectrum needs two variables");
  require_hermitian(hamiltonian);
  const int n = hamiltonian.band_dim();
  if (chirality) {
    const Matrix& pi = *chirality;
    if (pi.rows() != n || pi.cols() != n) throw Error(ErrorKind::DimensionMismatch, "chirality has the wrong size");
    double defect = (pi * pi - Matrix::Identity(n, n)).norm();
    for (const auto& [e, a] : hamiltonian.terms()) defect = std::max(defect, (pi * a + a * pi).norm());
    if (defect > 1e-12 * symbol_scale(hamiltonian)) {
      throw Error(ErrorKind::ChiralViolation,
                  "symbol does not anticommute with the chirality (defect " + std::to_string(defect) + ")");
    }
  }

  const TruncatedOperator op = assemble(hamiltonian, Geometry::quarter(size), {0, options.dense_cap});
  const Matrix h = 0.5 * (op.matrix + op.matrix.adjoint());
  const linalg::HermitianEigen eig = linalg::hermitian_eigen(h);
  const RealVector& lambda = eig.values;
  const Matrix& vecs = eig.vectors;
  const int half = std::max(1, size / 2);
  const int corner = std::min(4, size);

  CornerSpectrum out;
  out.size = size;
  out.next_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> zero;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    out.eigenvalues.push_back(lambda(i));
    const Vector psi = vecs.col(i);
    out.participation.push_back(region_weight(psi, size, n, corner, corner));
    if (chirality) out.chirality.push_back(psi.dot(apply_onsite(*chirality, psi)).real());
    if (std::abs(lambda(i)) < options.zero_tol) {
      zero.push_back(i);
    } else {
      out.next_eigenvalue = std::min(out.next_eigenvalue, std::abs(lambda(i)));
    }
  }
  out.separated = out.next_eigenvalue > 10.0 * options.zero_tol;

  // Resolve the near-zero space: chirality first, then corner weight.
  Matrix z(h.rows(), static_cast<Eigen::Index>(zero.size()));
  for (std::size_t c = 0; c < zero.size(); ++c) z.col(c) = vecs.col(zero[c]);
  std::vector<Matrix> groups;
  if (chirality && z.cols() > 0) {
    Matrix pz(z.rows(), z.cols());
    for (Eigen::Index c = 0; c < z.cols(); ++c) pz.col(c) = apply_onsite(*chirality, z.col(c));
    const Eigen::SelfAdjointEigenSolver<Matrix> ce(z.adjoint() * pz);
    const Matrix rotated = z * ce.eigenvectors();
    std::vector<Eigen::Index> neg, pos;
    for (Eigen::Index c = 0; c < rotated.cols(); ++c) (ce.eigenvalues()(c) < 0 ? neg : pos).push_back(c);
    for (const auto* idx : {&pos, &neg}) {
      if (idx->empty()) continue;
      Matrix g(rotated.rows(), static_cast<Eigen::Index>(idx->size()));
      for (std::size_t c = 0; c < idx->size(); ++c) g.col(c) = rotated.col((*idx)[c]);
      groups.push_back(std::move(g));
    }
  } else if (z.cols() > 0) {
    groups.push_back(z);
  }
  for (const Matrix& g : groups) {
    Matrix qg(g.rows(), g.cols());
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      Vector v = Vector::Zero(g.rows());
      for (int m = 0; m < half; ++m) {
        for (int k = 0; k < half; ++k) {
          const Eigen::Index at = static_cast<Eigen::Index>(m * size + k) * n;
          v.segment(at, n) = g.col(c).segment(at, n);
        }
      }
      qg.col(c) = v;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> qe(g.adjoint() * qg);
    const Matrix modes = g * qe.eigenvectors();
    for (Eigen::Index c = 0; c < modes.cols(); ++c) {
      const Vector psi = modes.col(c).normalized();
      CornerMode m;
      m.lambda = psi.dot(h * psi).real();
      m.chirality = chirality ? psi.dot(apply_onsite(*chirality, psi)).real() : 0.0;
      m.corner_weight = region_weight(psi, size, n, half, half);
      m.participation = region_weight(psi, size, n, corner, corner);
      out.zero_modes.push_back(m);
      if (m.corner_weight > options.corner_weight) {
        ++out.corner_count;
        if (m.chirality > 0.5) ++out.signed_count;
        if (m.chirality < -0.5) --out.signed_count;
      }
    }
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const CornerSpectrum& s, std::optional<double> t,
                        bool header) {
  const bool chiral = !s.chirality.empty();
  if (header) {
    if (t) out << "t,";
    out << "eigenvalue_index,lambda";
    if (chiral) out << ",chirality";
    out << ",participation_near_corner\n";
  }
  out << std::setprecision(17);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (t) out << *t << ',';
    out << i << ',' << s.eigenvalues[i];
    if (chiral) out << ',' << s.chirality[i];
    out << ',' << s.participation[i] << '\n';
  }
}

SpectralFlowResult track_spectral_flow(const std::function<Matrix(double)>& family, double t0,
                                       double t1, int samples, bool closed,
                                       const FlowOptions& options, const ModeFilter& filter) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "spectral flow needs at least two samples");
  const double span = t1 - t0;
  SpectralFlowResult out;
  out.t_samples = samples;
  out.t.resize(samples);
  for (int k = 0; k < samples; ++k) {
    out.t[k] = closed ? t0 + span * (k + 0.5) / samples : t0 + span * k / (samples - 1);
  }

  struct Sample {
    std::vector<double> lambda;
    Matrix vectors;
  };
  std::vector<Sample> data(samples);
  parallel_for(samples, [&](std::size_t k) {
    const Matrix m = family(out.t[k]);
    if (linalg::hermiticity_defect(m) > 1e-10 * std::max(1.0, m.norm())) {
      throw Error(ErrorKind::NotHermitian, "family member is not hermitian");
    }
    const linalg::HermitianEigen eig = linalg::hermitian_eigen(0.5 * (m + m.adjoint()));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (std::abs(eig.values(i)) >= options.window) continue;
      if (filter && !filter(eig.vectors.col(i))) continue;
      keep.push_back(i);
    }
    data[k].vectors.resize(m.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      data[k].lambda.push_back(eig.values(keep[c]));
      data[k].vectors.col(c) = eig.vectors.col(keep[c]);
    }
  });
  for (const Sample& s : data) out.window_eigenvalues.push_back(s.lambda);

  auto sign_of = [&](double x) { return std::abs(x) < options.dead_band ? 0 : (x > 0 ? 1 : -1); };
  // Sign carried by each mode of the current sample (last sign outside the dead band).
  std::vector<int> carried(data[0].lambda.size());
  for (std::size_t i = 0; i < carried.size(); ++i) carried[i] = sign_of(data[0].lambda[i]);

  const int steps = closed ? samples : samples - 1;
  for (int k = 0; k < steps; ++k) {
    const Sample& a = data[k];
    const Sample& b = data[(k + 1) % samples];
    const double ta = out.t[k];
    const double tb = k + 1 < samples ? out.t[k + 1] : out.t[0] + span;
    const Eigen::Index na = a.vectors.cols(), nb = b.vectors.cols();
    Eigen::MatrixXd overlap = (a.vectors.adjoint() * b.vectors).cwiseAbs2();

    std::vector<int> match(na, -1), taken(nb, 0);
    struct Pair {
      double o;
      Eigen::Index i, j;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index i = 0; i < na; ++i) {
      for (Eigen::Index j = 0; j < nb; ++j) pairs.push_back({overlap(i, j), i, j});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.o > y.o; });
    for (const Pair& p : pairs) {
      if (p.o < options.overlap_floor) break;
      if (match[p.i] >= 0 || taken[p.j]) continue;
      match[p.i] = static_cast<int>(p.j);
      taken[p.j] = 1;
    }
    const double inner = 0.5 * options.window;
    for (Eigen::Index i = 0; i < na; ++i) {
      if (match[i] < 0 && std::abs(a.lambda[i]) < inner) {
        std::ostringstream msg;
        msg << "eigenvalue " << a.lambda[i] << " at t = " << ta
            << " has no partner above the overlap floor at t = " << tb;
        throw Error(ErrorKind::TrackingAmbiguous, msg.str());
      }
    }
    for (Eigen::Index j = 0; j < nb; ++j) {
      if (!taken[j] && std::abs(b.lambda[j]) < inner) {
        std::ostringstream msg;
        msg << "eigenvalue " << b.lambda[j] << " appears at t = " << tb << " without a predecessor";
        throw Error(ErrorKind::TrackingAmbiguous, msg.str());
      }
    }

    std::vector<int> next(nb, 0);
    for (Eigen::Index j = 0; j < nb; ++j) next[j] = sign_of(b.lambda[j]);
    for (Eigen::Index i = 0; i < na; ++i) {
      if (match[i] < 0) continue;
      const int j = match[i];
      const int before = carried[i];
      const int after = sign_of(b.lambda[j]);
      if (before != 0 && after != 0 && before != after) {
        const double la = a.lambda[i], lb = b.lambda[j];
        double tc = ta + (tb - ta) * la / (la - lb);
        if (closed && tc >= t0 + span - 1e-12 * span) tc = std::max(t0, tc - span);
        out.crossings.push_back({tc, after});
        out.flow += after;
      }
      if (after == 0) next[j] = before;
    }
    carried = std::move(next);
  }
  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
  return out;
}

SpectralFlowResult spectral_flow(const LaurentSymbol& family, int t_var, int t_samples, int size,
                                 const FlowOptions& options) {
  if (family.num_vars() != 3) throw Error(ErrorKind::DimensionMismatch, "spectral flow needs a three-variable family");
  require_hermitian(family);
  const int n = family.band_dim();

  if (options.certify) {
    std::vector<std::optional<SliceFailure>> failures(t_samples);
    parallel_for(t_samples, [&](std::size_t k) {
      const double t = kTwoPi * (k + 0.5) / t_samples;
      const HalfPlaneCertificate cert =
          certify_half_planes(family_surface(family, t_var, t), options.certificate_samples);
      if (!cert.fredholm) failures[k] = cert.failures.front();
    });
    for (int k = 0; k < t_samples; ++k) {
      if (!failures[k]) continue;
      const double t = kTwoPi * (k + 0.5) / t_samples;
      std::ostringstream msg;
      msg << "half-plane operator is not invertible at t = " << t;
      throw NotFredholmError(failures[k]->direction, failures[k]->angle, t, true, failures[k]->indices,
                             msg.str());
    }
  }

  auto member = [&](double t) {
    return assemble(family_surface(family, t_var, t), Geometry::quarter(size), {0, options.dense_cap}).matrix;
  };
  ModeFilter filter;
  if (options.corner_only) {
    const int half = std::max(1, size / 2);
    filter = [=](const Vector& psi) { return region_weight(psi, size, n, half, half) > options.corner_weight; };
  }
  SpectralFlowResult r = track_spectral_flow(member, 0.0, kTwoPi, t_samples, true, options, filter);
  r.size = size;
  return r;
}

void write_dense_binary(std::ostream& out, const TruncatedOperator& op) {
  const std::uint64_t header[3] = {static_cast<std::uint64_t>(op.matrix.rows()),
                                   static_cast<std::uint64_t>(op.matrix.cols()),
                                   static_cast<std::uint64_t>(op.band_dim)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      const double v[2] = {op.matrix(r, c).real(), op.matrix(r, c).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof(v));
    }
  }
}

Matrix read_dense_binary(std::istream& in, int* band_dim) {
  std::uint64_t header[3];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header))) {
    throw Error(ErrorKind::ParseError, "dense dump: truncated header");
  }
  if (band_dim) *band_dim = static_cast<int>(header[2]);
  Matrix m(static_cast<Eigen::Index>(header[0]), static_cast<Eigen::Index>(header[1]));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double v[2];
      if (!in.read(reinterpret_cast<char*>(v), sizeof(v))) {
        throw Error(ErrorKind::ParseError, "dense dump: truncated data");
      }
      m(r, c) = {v[0], v[1]};
    }
  }
  return m;
}

}  // namespace qtop
