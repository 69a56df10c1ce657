#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qtop/errors.hpp"
#include "qtop/parallel.hpp"
#include "qtop/symbol_io.hpp"
#include "report.hpp"

namespace qtop::cli {
namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotCanonical:
    case ErrorKind::NotFredholm:
    case ErrorKind::SingularOnTorus:
      return kObstruction;
    case ErrorKind::NonConvergent:
    case ErrorKind::IllConditioned:
    case ErrorKind::Unstable:
    case ErrorKind::TrackingAmbiguous:
    case ErrorKind::CalibrationFailed:
    case ErrorKind::WindowTooSmall:
    case ErrorKind::UndersampledLoop:
      return kNonConvergent;
    default:
      return kInputError;
  }
}

std::string format_indices(const std::vector<int>& k) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ']';
  return os.str();
}

void emit(std::ostream& out, const json& report, const std::string& path) {
  if (path.empty()) {
    out << report.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  file << report.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  return file;
}

AZClassSpec class_spec(const std::string& label) {
  const auto parsed = parse_az_label(label);
  if (!parsed) throw Error(ErrorKind::InvalidArgument, "unknown symmetry class '" + label + "'");
  return az_class(*parsed);
}

struct FactorizeArgs {
  std::string file, out, series;
  int var = 0;
  std::vector<double> params;
  std::string trunc = "auto";
  double tol = 1e-10;
};

int cmd_factorize(const FactorizeArgs& a, std::ostream& out, std::ostream& err) {
  const LaurentSymbol symbol = read_symbol_file(a.file);
  const int d = symbol.num_vars();
  if (a.var < 0 || a.var >= d) throw Error(ErrorKind::InvalidArgument, "--var out of range");
  LaurentSymbol s = symbol;
  if (d > 1) {
    std::vector<double> angles = a.params;
    if (angles.empty()) angles.assign(d - 1, 0.0);
    if (static_cast<int>(angles.size()) != d - 1) {
      throw Error(ErrorKind::InvalidArgument, "--param needs one angle per fixed variable");
    }
    std::vector<Complex> fixed;
    for (double x : angles) fixed.push_back(unit(x));
    s = slice(symbol, a.var, fixed).to_symbol();
  }
  FactorizationOptions opt;
  opt.tol = a.tol;
  if (a.trunc != "auto") {
    try {
      opt.truncation = std::stoi(a.trunc);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--trunc must be 'auto' or an integer");
    }
    if (opt.truncation < 1) throw Error(ErrorKind::InvalidArgument, "--trunc must be positive");
  }

  json report = header("factorize");
  report["var"] = a.var;
  report["param"] = a.params;
  const std::vector<int> kappa = partial_indices(s, opt);
  report["partial_indices"] = kappa;
  bool canonical = true;
  for (int k : kappa) canonical = canonical && k == 0;
  report["canonical"] = canonical;
  if (!canonical) {
    emit(out, report, a.out);
    err << "not canonical: partial indices " << format_indices(kappa) << '\n';
    return kObstruction;
  }
  const FactorizationResult r = canonical_factorize(s, opt);
  report["factorization"] = to_json(r, verify_factorization(s, r));
  emit(out, report, a.out);
  if (!a.series.empty()) {
    open_output(a.series) << series_document(r.plus_inverse_coeffs);
  }
  return kOk;
}

struct IndexArgs {
  std::string file, mode = "both";
  std::vector<int> sizes{10, 14, 18};
  std::vector<int> grid{64, 33, 64};
  bool refine = false;
  int samples = 64;
  double threshold = 1e-2;
};

int cmd_index(const IndexArgs& a, std::ostream& out, std::ostream& err) {
  const LaurentSymbol symbol = read_symbol_file(a.file);
  const bool want_w3 = a.mode != "truncation";
  const bool want_trunc = a.mode != "w3";
  if (want_w3 && symbol.num_vars() != 2) {
    throw Error(ErrorKind::InvalidArgument, "w3 mode needs a two-variable symbol");
  }
  if (a.grid.size() != 3) throw Error(ErrorKind::InvalidArgument, "--grid takes three integers");

  json report = header("index");
  report["mode"] = a.mode;
  std::optional<int> trunc_index, w3_index;
  if (want_trunc) {
    const IndexReport r = numerical_index(symbol, a.sizes);
    report["truncation"] = to_json(r);
    trunc_index = r.index;
  }
  if (want_w3) {
    ExtensionOptions eo;
    eo.samples_per_circle = a.samples;
    const ExtendedSymbol ext = build_extended(symbol, eo);
    W3Options wo;
    wo.n_theta = a.grid[0];
    wo.n_rho = a.grid[1];
    wo.n_phi = a.grid[2];
    wo.refine = a.refine;
    wo.threshold = a.threshold;
    const W3Result r = w3(ext, wo);
    report["w3"] = to_json(r);
    report["w3"]["trusted"] = r.trusted(a.threshold);
    if (!r.trusted(a.threshold)) {
      emit(out, report, "");
      err << "w3 residual " << r.residual << " above " << a.threshold << '\n';
      return kNonConvergent;
    }
    w3_index = r.rounded;
  }
  if (trunc_index && w3_index) {
    report["agree"] = *trunc_index == *w3_index;
    emit(out, report, "");
    if (*trunc_index != *w3_index) {
      err << "index mismatch: truncation " << *trunc_index << " vs w3 " << *w3_index << '\n';
      return kCrossCheck;
    }
    return kOk;
  }
  emit(out, report, "");
  return kOk;
}

struct CornerArgs {
  std::string file, label = "AIII", csv;
  int size = 20;
  double zero_tol = 1e-6;
  bool from_block = false;
  bool skip_w3 = false;
};

int cmd_corner(const CornerArgs& a, std::ostream& out, std::ostream& err) {
  const LaurentSymbol input = read_symbol_file(a.file);
  const LaurentSymbol h = a.from_block ? assemble_chiral(input) : input;
  const AZClassSpec spec = class_spec(a.label);
  std::optional<Matrix> pi;
  if (spec.chiral) {
    if (h.band_dim() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "chiral classes need even band dimension");
    pi = default_chirality(h.band_dim());
  }
  CornerOptions co;
  co.zero_tol = a.zero_tol;
  const CornerSpectrum cs = corner_spectrum(h, a.size, pi, co);
  json report = header("corner");
  report["class"] = a.label;
  report["spectrum"] = to_json(cs);
  if (!a.csv.empty()) {
    std::ofstream f = open_output(a.csv);
    write_spectrum_csv(f, cs);
  }
  if (spec.chiral && !a.skip_w3) {
    const ExtendedSymbol ext = build_extended(chiral_block(h));
    const W3Result r = w3(ext);
    report["w3"] = to_json(r);
    report["agree"] = r.rounded == cs.signed_count;
    emit(out, report, "");
    if (r.rounded != cs.signed_count) {
      err << "signed corner count " << cs.signed_count << " differs from W3(h^E) = " << r.rounded << '\n';
      return kCrossCheck;
    }
    return kOk;
  }
  emit(out, report, "");
  return kOk;
}

struct FlowArgs {
  std::string file;
  int tvar = 2, tsamples = 32, size = 10;
  double window = 0.5;
  bool all_modes = false;
};

int cmd_flow(const FlowArgs& a, std::ostream& out, std::ostream&) {
  const LaurentSymbol family = read_symbol_file(a.file);
  FlowOptions fo;
  fo.window = a.window;
  fo.corner_only = !a.all_modes;
  const SpectralFlowResult r = spectral_flow(family, a.tvar, a.tsamples, a.size, fo);
  json report = header("flow");
  report["result"] = to_json(r);
  emit(out, report, "");
  return kOk;
}

struct ExtendArgs {
  std::string file, point, csv;
  int dump = 0;
  int samples = 64;
  int tvar = -1;
  int tsamples = 32;
  std::optional<double> t;
};

int cmd_extend(const ExtendArgs& a, std::ostream& out, std::ostream&) {
  if (a.point.empty() == (a.dump == 0)) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --eval and --dump");
  }
  const LaurentSymbol symbol = read_symbol_file(a.file);
  ExtensionOptions eo;
  eo.samples_per_circle = a.samples;
  eo.t_samples = a.tsamples;
  const ExtendedSymbol ext =
      a.tvar >= 0 ? build_extended_family(symbol, a.tvar, eo) : build_extended(symbol, eo);
  if (!a.point.empty()) {
    const ChartPoint p = parse_chart_point(a.point);
    json report = header("extend");
    report["point"] = format_chart_point(p);
    report["value"] = to_json(eval_extended(ext, p));
    report["seam_error"] = ext.seam_error();
    emit(out, report, "");
    return kOk;
  }
  const ChartGrid grid = ChartGrid::uniform(a.dump, a.dump, a.dump);
  if (a.csv.empty()) {
    write_extended_csv(out, ext, grid, a.t);
  } else {
    std::ofstream f = open_output(a.csv);
    write_extended_csv(f, ext, grid, a.t);
  }
  return kOk;
}

struct SymmetryArgs {
  std::string file, label;
  int grid = 16;
  double tol = 1e-12;
};

int cmd_symmetry(const SymmetryArgs& a, std::ostream& out, std::ostream& err) {
  const LaurentSymbol symbol = read_symbol_file(a.file);
  const SymmetryReport r = check_symmetry(symbol, class_spec(a.label), a.grid, a.tol);
  json report = header("symmetry");
  report["result"] = to_json(r);
  emit(out, report, "");
  if (!r.pass()) {
    err << "symbol violates class " << a.label << " (max " << r.max_violation() << ")\n";
    return kCheckFailed;
  }
  return kOk;
}

struct GappedArgs {
  std::string file, label;
};

int cmd_gapped(const GappedArgs& a, std::ostream& out, std::ostream&) {
  const LaurentSymbol symbol = read_symbol_file(a.file);
  const GappedInvariantReport r = gapped_invariant_report(symbol, class_spec(a.label));
  json report = header("gapped");
  report["result"] = to_json(r);
  emit(out, report, "");
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological invariants of quarter-plane Toeplitz operators", "qtop"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: QTOP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  FactorizeArgs fa;
  auto* fac = app.add_subcommand("factorize", "Right Wiener-Hopf factorization of a slice");
  fac->add_option("file", fa.file, "Symbol file")->required();
  fac->add_option("--var", fa.var, "Factorization variable");
  fac->add_option("--param", fa.params, "Angles of the remaining variables")->delimiter(',');
  fac->add_option("--trunc", fa.trunc, "Series truncation order or 'auto'");
  fac->add_option("--tol", fa.tol, "Residual target")->check(CLI::PositiveNumber);
  fac->add_option("--out", fa.out, "Write the report here instead of stdout");
  fac->add_option("--dump-series", fa.series, "Write the f_+^{-1} series as a symbol file");

  IndexArgs ia;
  auto* idx = app.add_subcommand("index", "Quarter-plane Fredholm index");
  idx->add_option("file", ia.file, "Symbol file")->required();
  idx->add_option("--mode", ia.mode, "w3, truncation or both")
      ->check(CLI::IsMember({"w3", "truncation", "both"}));
  idx->add_option("--sizes", ia.sizes, "Truncation sizes")->delimiter(',');
  idx->add_option("--grid", ia.grid, "W3 grid n_theta,n_rho,n_phi")->delimiter(',');
  idx->add_flag("--refine", ia.refine, "Refine the W3 grid until the residual is small");
  idx->add_option("--samples", ia.samples, "Factorized slices per circle");
  idx->add_option("--threshold", ia.threshold, "W3 rounding threshold")->check(CLI::PositiveNumber);

  CornerArgs ca;
  auto* cor = app.add_subcommand("corner", "Corner spectrum of the quarter truncation");
  cor->add_option("file", ca.file, "Hamiltonian symbol file")->required();
  cor->add_option("--class", ca.label, "Symmetry class");
  cor->add_option("--size", ca.size, "Quarter size L")->check(CLI::PositiveNumber);
  cor->add_option("--out", ca.csv, "Spectrum CSV");
  cor->add_option("--zero-tol", ca.zero_tol, "Zero-mode tolerance")->check(CLI::PositiveNumber);
  cor->add_flag("--from-block", ca.from_block, "File holds h; use H = [[0, h*], [h, 0]]");
  cor->add_flag("--no-w3", ca.skip_w3, "Skip the W3(h^E) cross-check");

  FlowArgs fl;
  auto* flo = app.add_subcommand("flow", "Spectral flow of a family of quarter truncations");
  flo->add_option("file", fl.file, "Three-variable symbol file")->required();
  flo->add_option("--tvar", fl.tvar, "Family variable");
  flo->add_option("--tsamples", fl.tsamples, "Samples of t")->check(CLI::PositiveNumber);
  flo->add_option("--size", fl.size, "Quarter size L")->check(CLI::PositiveNumber);
  flo->add_option("--window", fl.window, "Tracking window")->check(CLI::PositiveNumber);
  flo->add_flag("--all-modes", fl.all_modes, "Track every mode, not only those at the origin corner");

  ExtendArgs ea;
  auto* ext = app.add_subcommand("extend", "Evaluate or dump the extended symbol");
  ext->add_option("file", ea.file, "Symbol file")->required();
  ext->add_option("--eval", ea.point, "chart=TD|DT;theta=..;rho=..;phi=..[;t=..]");
  ext->add_option("--dump", ea.dump, "Dump a uniform grid with this many points per coordinate");
  ext->add_option("--out", ea.csv, "CSV path for --dump");
  ext->add_option("--samples", ea.samples, "Factorized slices per circle");
  ext->add_option("--tvar", ea.tvar, "Family variable of a three-variable symbol");
  ext->add_option("--tsamples", ea.tsamples, "Samples of t");
  ext->add_option("--t", ea.t, "Family parameter for --dump");

  SymmetryArgs sa;
  auto* sym = app.add_subcommand("symmetry", "Validate a symbol against a symmetry class");
  sym->add_option("file", sa.file, "Symbol file")->required();
  sym->add_option("--class", sa.label, "Symmetry class")->required();
  sym->add_option("--grid", sa.grid, "Samples per variable");
  sym->add_option("--tol", sa.tol, "Tolerance")->check(CLI::PositiveNumber);

  GappedArgs ga;
  auto* gap = app.add_subcommand("gapped", "Gapped invariant report of a Hamiltonian");
  gap->add_option("file", ga.file, "Hamiltonian symbol file")->required();
  gap->add_option("--class", ga.label, "Symmetry class")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("QTOP_THREADS")) {
      try {
        threads = std::max(0, std::stoi(env));
      } catch (const std::exception&) {
        err << "ignoring QTOP_THREADS='" << env << "'\n";
      }
    }
  }
  set_thread_count(threads);

  try {
    if (*fac) return cmd_factorize(fa, out, err);
    if (*idx) return cmd_index(ia, out, err);
    if (*cor) return cmd_corner(ca, out, err);
    if (*flo) return cmd_flow(fl, out, err);
    if (*ext) return cmd_extend(ea, out, err);
    if (*sym) return cmd_symmetry(sa, out, err);
    if (*gap) return cmd_gapped(ga, out, err);
  } catch (const NotCanonicalError& e) {
    err << "not canonical: partial indices " << format_indices(e.indices()) << ": " << e.what() << '\n';
    return kObstruction;
  } catch (const NotFredholmError& e) {
    err << "not Fredholm: " << e.what();
    if (!e.indices().empty()) err << " (partial indices " << format_indices(e.indices()) << ")";
    err << '\n';
    return kObstruction;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kInputError;
}

}  // namespace qtop::cli
