#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qtop/extension.hpp"
#include "qtop/invariants.hpp"
#include "qtop/operators.hpp"
#include "qtop/symmetry.hpp"
#include "qtop/wienerhopf.hpp"

namespace qtop::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "qtop 0.1.0";

json header(const std::string& command);
json to_json(const Matrix& m);
json to_json(const FactorizationResult& r, const FactorizationCheck& check);
json to_json(const W3Result& r);
json to_json(const IndexReport& r);
json to_json(const SymmetryReport& r);
json to_json(const HalfPlaneCertificate& c);
json to_json(const CornerSpectrum& s);
json to_json(const SpectralFlowResult& r);
json to_json(const GappedInvariantReport& r);

/// Coefficients sum_k c_k x^k as a one-variable symbol document.
std::string series_document(const std::vector<Matrix>& coeffs);

}  // namespace qtop::cli
