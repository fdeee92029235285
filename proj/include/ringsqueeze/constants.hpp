#pragma once

#include <complex>
#include <numbers>

namespace ringsqueeze {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 2.99792458e8;            // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline constexpr cplx kI{0.0, 1.0};

}  // namespace ringsqueeze
