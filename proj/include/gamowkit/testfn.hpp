#pragma once

namespace gamowkit {

/// Real C-infinity bump amplitude * exp(1 - 1/(1 - s^2)), s = (x - center) / half_width,
/// zero outside (center - half_width, center + half_width). Peak value is amplitude.
struct Bump {
  double center = 0.5;
  double half_width = 0.3;
  double amplitude = 1.0;

  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};

}  // namespace gamowkit
