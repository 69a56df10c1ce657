#include "report.hpp"

#include "qtop/symbol_io.hpp"

namespace qtop::cli {

json header(const std::string& command) {
  return json{{"version", kVersion}, {"command", command}};
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const FactorizationResult& r, const FactorizationCheck& check) {
  return json{{"partial_indices", r.partial_indices},
              {"truncation_order", r.truncation_order},
              {"residual", r.residual},
              {"equation_residual", check.equation_residual},
              {"tail_ratio", check.tail_ratio},
              {"tail_ok", check.tail_ok},
              {"section_condition", r.section_condition},
              {"plus_condition", r.plus_condition},
              {"minus_terms", r.minus_coeffs.size()}};
}

json to_json(const W3Result& r) {
  json history = json::array();
  for (const auto& h : r.history) {
    history.push_back({{"grid", {h.n_theta, h.n_rho, h.n_phi}}, {"raw", h.raw}, {"residual", h.residual}});
  }
  return json{{"raw_value", r.raw_value},
              {"rounded", r.rounded},
              {"residual", r.residual},
              {"imag_part", r.imag_part},
              {"chart_td", r.chart_td},
              {"chart_dt", r.chart_dt},
              {"grid", {r.n_theta, r.n_rho, r.n_phi}},
              {"orientation", r.orientation},
              {"history", history}};
}

json to_json(const IndexReport& r) {
  json sizes = json::array();
  for (const auto& s : r.per_size) {
    sizes.push_back({{"size", s.size}, {"kernel", s.kernel}, {"cokernel", s.cokernel}, {"index", s.index}});
  }
  return json{{"index", r.index}, {"per_size", sizes}};
}

json to_json(const SymmetryReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"relation", to_string(c.relation)},
                      {"on_block", c.on_block},
                      {"coefficient_violation", c.coefficient_violation},
                      {"grid_violation", c.grid_violation},
                      {"pass", c.pass}});
  }
  return json{{"class", to_string(r.label)}, {"pass", r.pass()}, {"max_violation", r.max_violation()},
              {"checks", checks}};
}

json to_json(const HalfPlaneCertificate& c) {
  json failures = json::array();
  for (const auto& f : c.failures) {
    failures.push_back({{"direction", f.direction}, {"angle", f.angle}, {"indices", f.indices}});
  }
  return json{{"fredholm", c.fredholm}, {"min_gap", {c.min_gap[0], c.min_gap[1]}}, {"failures", failures}};
}

json to_json(const CornerSpectrum& s) {
  json modes = json::array();
  for (const auto& m : s.zero_modes) {
    modes.push_back({{"lambda", m.lambda},
                     {"chirality", m.chirality},
                     {"corner_weight", m.corner_weight},
                     {"participation_near_corner", m.participation}});
  }
  return json{{"size", s.size},
              {"near_zero_modes", modes},
              {"corner_count", s.corner_count},
              {"signed_count", s.signed_count},
              {"next_eigenvalue", s.next_eigenvalue},
              {"separated", s.separated}};
}

json to_json(const SpectralFlowResult& r) {
  json crossings = json::array();
  for (const auto& c : r.crossings) crossings.push_back({{"t", c.t}, {"sign", c.sign}});
  return json{{"flow", r.flow}, {"crossings", crossings}, {"size", r.size}, {"t_samples", r.t_samples}};
}

json to_json(const GappedInvariantReport& r) {
  json j{{"class", to_string(r.label)},
         {"degree", r.degree},
         {"target_group", r.target_group},
         {"invariant_tag", r.invariant_tag},
         {"symmetry", to_json(r.symmetry)},
         {"certificate", to_json(r.certificate)},
         {"notes", r.notes}};
  j["invariant"] = r.invariant ? json(*r.invariant) : json(nullptr);
  if (r.w3) j["w3"] = to_json(*r.w3);
  if (r.hermitian) j["hermitian_violation"] = r.hermitian->max_violation;
  if (r.equivariance) j["equivariance_violation"] = r.equivariance->max_violation;
  return j;
}

std::string series_document(const std::vector<Matrix>& coeffs) {
  std::vector<std::pair<Exponent, Matrix>> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].cwiseAbs().maxCoeff() > 0.0) terms.emplace_back(Exponent{static_cast<int>(k)}, coeffs[k]);
  }
  return format_symbol(LaurentSymbol::from_terms(1, static_cast<int>(coeffs.front().rows()), terms));
}

}  // namespace qtop::cli
