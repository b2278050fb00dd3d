#include "gamowkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gamowkit {

namespace {

struct Interval {
  double a;
  double b;
  Complex value;
  double error;
  bool operator<(const Interval& other) const { return error < other.error; }
};

Interval gk15(const std::function<Complex(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  // Non-negative half of the 15-point rule, centre first; the even entries
  // are the 7-point Gauss nodes.
  static const auto& xk = Kronrod::abscissa();
  static const auto& wk = Kronrod::weights();
  static const auto& wg = Gauss::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex kronrod = fc * wk[0];
  Complex gauss = fc * wg[0];
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const double dx = half * xk[j];
    const Complex sum = f(center - dx) + f(center + dx);
    kronrod += wk[j] * sum;
    if (j % 2 == 0) gauss += wg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<Complex(double)>& f, double a, double b,
                                const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) return result;
  std::priority_queue<Interval> queue;
  queue.push(gk15(f, a, b));
  result.evaluations = 15;
  Complex total = queue.top().value;
  double error = queue.top().error;
  int intervals = 1;
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (intervals >= options.max_intervals) {
      result.converged = false;
      break;
    }
    const Interval worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      result.converged = false;
      break;
    }
    queue.pop();
    const Interval left = gk15(f, worst.a, mid);
    const Interval right = gk15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  // Re-sum from the leaves so the running updates leave no roundoff behind.
  total = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  result.value = total;
  result.error = error;
  return result;
}

QuadratureResult integrate_segment(const std::function<Complex(Complex)>& f, Complex z0,
                                   Complex z1, const QuadratureOptions& options) {
  const Complex dz = z1 - z0;
  auto g = [&](double s) { return f(z0 + s * dz) * dz; };
  return integrate_gk15(g, 0.0, 1.0, options);
}

GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const GaussLegendreRule base = gauss_legendre(order);
  CompositeRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int j = 0; j < order; ++j) {
      rule.nodes.push_back(lo + 0.5 * width * (base.nodes[j] + 1.0));
      rule.weights.push_back(0.5 * width * base.weights[j]);
    }
  }
  return rule;
}

}  // namespace gamowkit
