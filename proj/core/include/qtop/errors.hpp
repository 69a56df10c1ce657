#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qtop {

enum class ErrorKind {
  ZeroCoordinate,
  DimensionMismatch,
  DuplicateExponent,
  InvalidArgument,
  ParseError,
  SingularOnTorus,
  WindowTooSmall,
  NonConvergent,
  NotCanonical,
  IllConditioned,
  NotFredholm,
  OutOfDomain,
  UndersampledLoop,
  CalibrationFailed,
  SymmetryViolation,
  SizeOverflow,
  Unstable,
  NotHermitian,
  ChiralViolation,
  TrackingAmbiguous,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when a one-variable symbol has nonzero partial indices.
class NotCanonicalError : public Error {
 public:
  NotCanonicalError(std::vector<int> indices, const std::string& what);

  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  std::vector<int> indices_;
};

// Thrown when a half-plane compression is not invertible. `direction` is the
// index of the variable that was being factorized (0 = z, 1 = w).
class NotFredholmError : public Error {
 public:
  NotFredholmError(int direction, double parallel_angle, double family_angle,
                   bool has_family, std::vector<int> indices,
                   const std::string& what);

  int direction() const noexcept { return direction_; }
  double parallel_angle() const noexcept { return parallel_angle_; }
  double family_angle() const noexcept { return family_angle_; }
  bool has_family() const noexcept { return has_family_; }
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  int direction_;
  double parallel_angle_;
  double family_angle_;
  bool has_family_;
  std::vector<int> indices_;
};

}  // namespace qtop
