#include "qtop/symbol_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qtop/errors.hpp"

namespace qtop {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

int require_int(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field)) fail(where + ": missing field '" + field + "'");
  const json& v = j.at(field);
  if (!v.is_number_integer()) fail(where + ": field '" + field + "' must be an integer");
  return v.get<int>();
}

Complex parse_entry(const json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    fail(where + ": entry must be a [re, im] pair of numbers");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

LaurentSymbol parse_symbol(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    fail("line " + std::to_string(line) + ", column " + std::to_string(col) +
         ": malformed symbol document (" + e.what() + ")");
  }
  if (!doc.is_object()) fail("symbol document must be an object");
  const int d = require_int(doc, "num_vars", "document");
  const int n = require_int(doc, "band_dim", "document");
  if (d < 1 || d > 3) fail("document: 'num_vars' must be 1, 2 or 3");
  if (n < 1) fail("document: 'band_dim' must be positive");
  if (!doc.contains("terms") || !doc.at("terms").is_array()) {
    fail("document: field 'terms' must be an array");
  }

  std::vector<std::pair<Exponent, Matrix>> terms;
  const json& arr = doc.at("terms");
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const std::string where = "terms[" + std::to_string(t) + "]";
    const json& term = arr[t];
    if (!term.is_object()) fail(where + ": must be an object");
    if (!term.contains("exponents") || !term.at("exponents").is_array()) {
      fail(where + ": field 'exponents' must be an array");
    }
    Exponent exponent;
    for (const json& v : term.at("exponents")) {
      if (!v.is_number_integer()) fail(where + ".exponents: entries must be integers");
      exponent.push_back(v.get<int>());
    }
    if (static_cast<int>(exponent.size()) != d) {
      fail(where + ".exponents: expected " + std::to_string(d) + " entries");
    }
    if (!term.contains("matrix") || !term.at("matrix").is_array() ||
        static_cast<int>(term.at("matrix").size()) != n) {
      fail(where + ".matrix: expected " + std::to_string(n) + " rows");
    }
    Matrix m(n, n);
    const json& rows = term.at("matrix");
    for (int r = 0; r < n; ++r) {
      const std::string row_where = where + ".matrix[" + std::to_string(r) + "]";
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
        fail(row_where + ": expected " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        m(r, c) = parse_entry(rows[r][c], row_where + "[" + std::to_string(c) + "]");
      }
    }
    terms.emplace_back(std::move(exponent), std::move(m));
  }
  return LaurentSymbol::from_terms(d, n, terms);
}

LaurentSymbol read_symbol_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open symbol file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_symbol(buf.str());
}

std::string format_symbol(const LaurentSymbol& symbol) {
  json doc;
  doc["num_vars"] = symbol.num_vars();
  doc["band_dim"] = symbol.band_dim();
  json terms = json::array();
  for (const auto& [e, a] : symbol.terms()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
      rows.push_back(std::move(row));
    }
    terms.push_back({{"exponents", e}, {"matrix", std::move(rows)}});
  }
  doc["terms"] = std::move(terms);
  return doc.dump(2) + "\n";
}

void write_symbol_file(const LaurentSymbol& symbol, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << format_symbol(symbol);
}

}  // namespace qtop
