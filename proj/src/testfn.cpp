#include "gamowkit/testfn.hpp"

#include <cmath>

namespace gamowkit {

// With g(s) = 1 - 1/(1 - s^2) the bump is A exp(g):
//   g'  = -2s / (1 - s^2)^2
//   g'' = -(2 + 6 s^2) / (1 - s^2)^3

double Bump::operator()(double x) const {
  const double s = (x - center) / half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double Bump::derivative(double x) const {
  const double s = (x - center) / half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return (*this)(x) * (-2.0 * s / (q * q)) / half_width;
}

double Bump::second_derivative(double x) const {
  const double s = (x - center) / half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  const double g1 = -2.0 * s / (q * q);
  const double g2 = -(2.0 + 6.0 * s * s) / (q * q * q);
  return (*this)(x) * (g1 * g1 + g2) / (half_width * half_width);
}

}  // namespace gamowkit
