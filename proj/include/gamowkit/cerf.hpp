#pragma once

#include "gamowkit/types.hpp"

namespace gamowkit {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid in the whole plane.
Complex faddeeva(Complex z);

/// Leading terms of the large-|z| expansion of w in the upper half plane,
/// i / (sqrt(pi) z) * sum_{n < terms} (2n-1)!! / (2 z^2)^n.
Complex faddeeva_asymptotic(Complex z, int terms);

struct MArgument {
  Complex k;
  double t;
  Complex y;  // -exp(-i pi/4) k sqrt(t)

  static MArgument make(Complex k, double t);
};

/// M(k, t) = (i / 2 pi) int dk' exp(-i k'^2 t) / (k' - k) = w(i y) / 2.
Complex m_function(Complex k, double t);

/// M(k, t) - 1 / (2 sqrt(pi) y): M with its t^{-1/2} leading tail removed.
/// Substituting it for M in the full-pole propagator leaves the sum
/// unchanged in the limit (the removed pieces cancel by the u u / k sum rule)
/// while making the truncated sum converge much faster.
Complex m_function_subtracted(Complex k, double t);

}  // namespace gamowkit
