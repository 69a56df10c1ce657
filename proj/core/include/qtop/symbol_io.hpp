#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qtop/laurent.hpp"

namespace qtop {

/// Parses the symbol interchange document
///   { "num_vars": d, "band_dim": N,
///     "terms": [ { "exponents": [j1, ...], "matrix": [[[re, im], ...], ...] }, ... ] }
/// Malformed input raises Error(ParseError) naming the line or field;
/// duplicate exponent vectors raise Error(DuplicateExponent).
LaurentSymbol parse_symbol(std::string_view text);
LaurentSymbol read_symbol_file(const std::filesystem::path& path);

std::string format_symbol(const LaurentSymbol& symbol);
void write_symbol_file(const LaurentSymbol& symbol, const std::filesystem::path& path);

}  // namespace qtop
