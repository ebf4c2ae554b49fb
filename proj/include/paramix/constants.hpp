#pragma once

#include <complex>
#include <numbers>

namespace paramix {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kFluxQuantum = 2.067833848e-15;   // Wb
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr cplx kI{0.0, 1.0};

}  // namespace paramix
