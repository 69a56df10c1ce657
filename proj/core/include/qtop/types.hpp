#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace qtop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline Complex unit(double angle) { return std::polar(1.0, angle); }

}  // namespace qtop
