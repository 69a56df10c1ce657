#pragma once

#include <span>

#include "qtop/types.hpp"

namespace qtop {

/// Winding number of a closed loop of nonzero samples: the total unwrapped
/// argument increment divided by 2 pi. Throws UndersampledLoop when two
/// consecutive samples differ in phase by pi or more, and SingularOnTorus on
/// a zero sample.
int winding_number(std::span<const Complex> samples);

}  // namespace qtop
