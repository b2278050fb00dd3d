#pragma once

#include <functional>
#include <vector>

#include "gamowkit/types.hpp"

namespace gamowkit {

struct QuadratureResult {
  Complex value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b] for a complex-valued
/// integrand. The interval with the largest error estimate is bisected until
/// the summed estimate meets max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_gk15(const std::function<Complex(double)>& f, double a, double b,
                                const QuadratureOptions& options = {});

/// Integral of an analytic function along the straight segment z0 -> z1.
QuadratureResult integrate_segment(const std::function<Complex(Complex)>& f, Complex z0,
                                   Complex z1, const QuadratureOptions& options = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Nodes and weights of a composite Gauss-Legendre rule with `panels` equal
/// panels of `order` points on [a, b].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order);

}  // namespace gamowkit
