#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace gamowkit {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Mass and Planck constant for the modules that keep them explicit. The
// defaults reproduce the hbar = 2m = 1 convention used everywhere else.
struct PhysicalUnits {
  double mass = 0.5;
  double hbar = 1.0;

  double planck_h() const { return 2.0 * pi * hbar; }
};

}  // namespace gamowkit
