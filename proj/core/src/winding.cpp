#include "qtop/winding.hpp"

#include <cmath>

#include "qtop/errors.hpp"

namespace qtop {

int winding_number(std::span<const Complex> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "winding number needs at least two samples");
  }
  // Steps within 1e-9 of pi are ambiguous in direction.
  constexpr double kMaxStep = kPi - 1e-9;
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex a = samples[k];
    const Complex b = samples[(k + 1) % samples.size()];
    if (a == Complex(0.0) || b == Complex(0.0)) {
      throw Error(ErrorKind::SingularOnTorus, "loop passes through zero");
    }
    const double step = std::arg(b / a);
    if (std::abs(step) >= kMaxStep) {
      throw Error(ErrorKind::UndersampledLoop,
                  "phase step of " + std::to_string(step) + " rad at sample " +
                      std::to_string(k) + " is too large to unwrap");
    }
    total += step;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace qtop
