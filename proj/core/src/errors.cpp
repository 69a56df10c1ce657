#include "qtop/errors.hpp"

#include <utility>

namespace qtop {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateExponent: return "DuplicateExponent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SingularOnTorus: return "SingularOnTorus";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::NotCanonical: return "NotCanonical";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotFredholm: return "NotFredholm";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::UndersampledLoop: return "UndersampledLoop";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::SymmetryViolation: return "SymmetryViolation";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ChiralViolation: return "ChiralViolation";
    case ErrorKind::TrackingAmbiguous: return "TrackingAmbiguous";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

NotCanonicalError::NotCanonicalError(std::vector<int> indices,
                                     const std::string& what)
    : Error(ErrorKind::NotCanonical, what), indices_(std::move(indices)) {}

NotFredholmError::NotFredholmError(int direction, double parallel_angle,
                                   double family_angle, bool has_family,
                                   std::vector<int> indices,
                                   const std::string& what)
    : Error(ErrorKind::NotFredholm, what),
      direction_(direction),
      parallel_angle_(parallel_angle),
      family_angle_(family_angle),
      has_family_(has_family),
      indices_(std::move(indices)) {}

}  // namespace qtop
