#include "gamowkit/cerf.hpp"

#include <cmath>
#include <limits>

#include "gamowkit/error.hpp"

namespace gamowkit {

namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;

// w(z) for Re z >= 0, Im z >= 0 (up to the final sign flips); this is the
// Poppe-Wijers scheme: power series near the origin, Laplace continued
// fraction far out, and a Taylor expansion driven by the continued fraction
// in between.
struct FirstQuadrant {
  Complex value;
  Complex exp_minus_z2;  // exp(-z^2), only filled in the series region
  bool series;
};

FirstQuadrant w_first_quadrant(double xabs, double yabs) {
  const double xs = xabs / 6.3;
  const double ys = yabs / 4.4;
  double qrho = xs * xs + ys * ys;
  const double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;

  if (qrho < 0.085264) {
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = 1.0 - kTwoOverSqrtPi * (xsum * yabs + ysum * xabs);
    const double v1 = kTwoOverSqrtPi * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    const Complex e(daux * std::cos(yquad), -daux * std::sin(yquad));
    return {Complex(u1, v1) * e, e, true};
  }

  double h = 0.0;
  int kapn = 0;
  int nu = 0;
  if (qrho > 1.0) {
    qrho = std::sqrt(qrho);
    nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
  } else {
    qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
    h = 1.88 * qrho;
    kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
    nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
  }
  const double h2 = 2.0 * h;
  const bool taylor = h > 0.0;
  double qlambda = taylor ? std::pow(h2, kapn) : 0.0;
  double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
  for (int n = nu; n >= 0; --n) {
    const double np1 = n + 1.0;
    double tx = yabs + h + np1 * rx;
    double ty = xabs - np1 * ry;
    const double c = 0.5 / (tx * tx + ty * ty);
    rx = c * tx;
    ry = c * ty;
    if (taylor && n <= kapn) {
      tx = qlambda + sx;
      sx = rx * tx - ry * sy;
      sy = ry * tx + rx * sy;
      qlambda /= h2;
    }
  }
  Complex value = taylor ? Complex(kTwoOverSqrtPi * sx, kTwoOverSqrtPi * sy)
                         : Complex(kTwoOverSqrtPi * rx, kTwoOverSqrtPi * ry);
  if (yabs == 0.0) value.real(std::exp(-xabs * xabs));
  return {value, Complex(), false};
}

}  // namespace

Complex faddeeva(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const FirstQuadrant q = w_first_quadrant(std::abs(x), std::abs(y));
  Complex w = q.value;
  if (y < 0.0) {
    // w(-z) = 2 exp(-z^2) - w(z), applied to the reflected first-quadrant point.
    Complex twice_gauss;
    if (q.series) {
      twice_gauss = 2.0 * q.exp_minus_z2;
    } else {
      const double xquad = y * y - x * x;
      const double yquad = 2.0 * std::abs(x) * std::abs(y);
      const double mag = 2.0 * std::exp(xquad);
      twice_gauss = Complex(mag * std::cos(yquad), -mag * std::sin(yquad));
    }
    w = twice_gauss - w;
    if (x > 0.0) w = std::conj(w);
  } else if (x < 0.0) {
    w = std::conj(w);
  }
  return w;
}

Complex faddeeva_asymptotic(Complex z, int terms) {
  const Complex inv2z2 = 1.0 / (2.0 * z * z);
  Complex sum = 0.0;
  Complex term = 1.0;
  for (int n = 0; n < terms; ++n) {
    sum += term;
    term *= (2.0 * n + 1.0) * inv2z2;
  }
  return I / (std::sqrt(pi) * z) * sum;
}

MArgument MArgument::make(Complex k, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive");
  if (!is_finite(k)) throw Error(ErrorKind::NonFiniteParameter, "pole must be finite");
  return {k, t, -std::exp(Complex(0.0, -pi / 4.0)) * k * std::sqrt(t)};
}

Complex m_function(Complex k, double t) {
  const MArgument arg = MArgument::make(k, t);
  return 0.5 * faddeeva(I * arg.y);
}

Complex m_function_subtracted(Complex k, double t) {
  const MArgument arg = MArgument::make(k, t);
  const Complex z = I * arg.y;
  return 0.5 * faddeeva(z) - 1.0 / (2.0 * std::sqrt(pi) * arg.y);
}

}  // namespace gamowkit
