#include "gamowkit/model.hpp"

#include <cmath>
#include <string>

#include "gamowkit/error.hpp"

namespace gamowkit {

namespace {

// sin(q x) / q, entire in q^2.
Complex sin_over(Complex q, double x) {
  const Complex z = q * x;
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return x * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0)));
  }
  return std::sin(z) / q;
}

// (x cos(q x) - sin(q x) / q) / q^2, the q-derivative kernel of sin_over.
Complex sin_over_slope(Complex q, double x) {
  const Complex z = q * x;
  if (std::abs(z) < 1e-2) {
    const Complex z2 = z * z;
    return x * x * x * (-1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0 + z2 * z2 * z2 / 45360.0);
  }
  return (x * std::cos(z) - std::sin(z) / q) / (q * q);
}

// (exp(2ika) - 1) / (2ik) and its k-derivative.
Complex shell_kernel(Complex k, double a) {
  const Complex x = 2.0 * I * k * a;
  if (std::abs(x) < 1e-3) {
    return a * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0 + x * x * x * x / 120.0);
  }
  return (std::exp(x) - 1.0) / (2.0 * I * k);
}

Complex shell_kernel_derivative(Complex k, double a) {
  const Complex c = 2.0 * I * a;
  if (std::abs(c * k) < 1e-3) {
    const Complex x = c * k;
    return a * c * (0.5 + x / 3.0 + x * x / 8.0 + x * x * x / 30.0 + x * x * x * x / 144.0);
  }
  return a * std::exp(c * k) / k - shell_kernel(k, a) / k;
}

Complex channel_momentum(Complex k, double shift) { return std::sqrt(k * k + shift); }

void require_radial(const PotentialModel& model, const char* what) {
  if (!model.radial()) {
    throw Error(ErrorKind::WrongModelKind, std::string(what) + " needs a radial model");
  }
}

void require_1d(const PotentialModel& model, const char* what) {
  if (model.radial()) {
    throw Error(ErrorKind::WrongModelKind, std::string(what) + " needs a 1D model");
  }
}

// Values at x = 0 of the 1D solution that equals exp(ikx) for x >= range:
// psi(0) and psi'(0-).
struct LeftEdge {
  Complex value;
  Complex slope;
};

LeftEdge left_edge(const PotentialModel& model, Complex k) {
  if (model.kind() == ModelKind::Barrier1DDelta) {
    return {1.0, I * k - model.strength()};
  }
  const double d = model.range();
  const Complex q = channel_momentum(k, -model.strength());
  const Complex c = std::cos(q * d);
  const Complex s = sin_over(q, d);
  const Complex e = std::exp(I * k * d);
  return {e * (c - I * k * s), e * ((q * q) * s + I * k * c)};
}

void check_not_pole(const PotentialModel& model, Complex k) {
  const Complex d = dispersion(model, k);
  if (std::abs(d) < 1e-13 * std::max(1.0, std::abs(2.0 * k))) {
    throw Error(ErrorKind::PoleEvaluation, "k is a zero of the dispersion function");
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::RadialDeltaShell: return "delta_shell";
    case ModelKind::RadialSquareWell: return "square_well";
    case ModelKind::Barrier1DDelta: return "delta_barrier";
    case ModelKind::Barrier1DSquare: return "square_barrier";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto kind : {ModelKind::RadialDeltaShell, ModelKind::RadialSquareWell,
                    ModelKind::Barrier1DDelta, ModelKind::Barrier1DSquare}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + std::string(name) + "'");
}

PotentialModel PotentialModel::delta_shell(double lambda, double a) {
  return build_model({.kind = ModelKind::RadialDeltaShell, .lambda = lambda, .a = a});
}
PotentialModel PotentialModel::square_well(double v0, double radius) {
  return build_model({.kind = ModelKind::RadialSquareWell, .v0 = v0, .r = radius});
}
PotentialModel PotentialModel::delta_barrier(double lambda) {
  return build_model({.kind = ModelKind::Barrier1DDelta, .lambda = lambda});
}
PotentialModel PotentialModel::square_barrier(double v0, double width) {
  return build_model({.kind = ModelKind::Barrier1DSquare, .v0 = v0, .d = width});
}

double PotentialModel::smooth_potential(double x) const noexcept {
  switch (kind_) {
    case ModelKind::RadialSquareWell: return (x < range_) ? -strength_ : 0.0;
    case ModelKind::Barrier1DSquare: return (x > 0.0 && x < range_) ? strength_ : 0.0;
    default: return 0.0;
  }
}

ModelSpec PotentialModel::spec() const {
  ModelSpec s;
  s.kind = kind_;
  switch (kind_) {
    case ModelKind::RadialDeltaShell: s.lambda = strength_; s.a = range_; break;
    case ModelKind::RadialSquareWell: s.v0 = strength_; s.r = range_; break;
    case ModelKind::Barrier1DDelta: s.lambda = strength_; break;
    case ModelKind::Barrier1DSquare: s.v0 = strength_; s.d = range_; break;
  }
  return s;
}

PotentialModel build_model(const ModelSpec& spec) {
  double strength = 0.0;
  double range = 0.0;
  switch (spec.kind) {
    case ModelKind::RadialDeltaShell: strength = spec.lambda; range = spec.a; break;
    case ModelKind::RadialSquareWell: strength = spec.v0; range = spec.r; break;
    case ModelKind::Barrier1DDelta: strength = spec.lambda; range = 0.0; break;
    case ModelKind::Barrier1DSquare: strength = spec.v0; range = spec.d; break;
  }
  if (!std::isfinite(strength) || !std::isfinite(range)) {
    throw Error(ErrorKind::NonFiniteParameter, "model parameters must be finite");
  }
  if (spec.kind != ModelKind::Barrier1DDelta && !(range > 0.0)) {
    throw Error(ErrorKind::NonPositiveRange, "range must be positive, got " + std::to_string(range));
  }
  return PotentialModel(spec.kind, strength, range);
}

Complex jost_function(const PotentialModel& model, Complex k) {
  require_radial(model, "jost_function");
  const double range = model.range();
  if (model.kind() == ModelKind::RadialDeltaShell) {
    return 1.0 + model.strength() * shell_kernel(k, range);
  }
  const Complex q = channel_momentum(k, model.strength());
  return std::exp(I * k * range) * (std::cos(q * range) - I * k * sin_over(q, range));
}

Complex jost_derivative(const PotentialModel& model, Complex k) {
  require_radial(model, "jost_derivative");
  const double range = model.range();
  if (model.kind() == ModelKind::RadialDeltaShell) {
    return model.strength() * shell_kernel_derivative(k, range);
  }
  const Complex q = channel_momentum(k, model.strength());
  const Complex s = sin_over(q, range);
  const Complex ds = k * sin_over_slope(q, range);
  const Complex e = std::exp(I * k * range);
  const Complex inner = std::cos(q * range) - I * k * s;
  const Complex dinner = -range * k * s - I * s - I * k * ds;
  return I * range * e * inner + e * dinner;
}

Complex dispersion(const PotentialModel& model, Complex k) {
  if (model.radial()) return 2.0 * I * k * jost_function(model, k);
  const LeftEdge edge = left_edge(model, k);
  return I * k * edge.value + edge.slope;
}

Complex dispersion_derivative(const PotentialModel& model, Complex k) {
  if (model.radial()) {
    return 2.0 * I * jost_function(model, k) + 2.0 * I * k * jost_derivative(model, k);
  }
  if (model.kind() == ModelKind::Barrier1DDelta) return 2.0 * I;
  // D = exp(ikd) [2ik C + (k^2 + q^2) S] with C = cos(qd), S = sin(qd)/q.
  const double d = model.range();
  const Complex q = channel_momentum(k, -model.strength());
  const Complex c = std::cos(q * d);
  const Complex s = sin_over(q, d);
  const Complex dc = -d * k * s;
  const Complex ds = k * sin_over_slope(q, d);
  const Complex e = std::exp(I * k * d);
  const Complex q2 = q * q;
  const Complex body = 2.0 * I * k * c + (k * k + q2) * s;
  const Complex dbody = 2.0 * I * c + 2.0 * I * k * dc + 4.0 * k * s + (k * k + q2) * ds;
  return I * d * e * body + e * dbody;
}

Complex pole_function(const PotentialModel& model, Complex k) {
  return model.radial() ? jost_function(model, k) : dispersion(model, k);
}

Complex pole_function_derivative(const PotentialModel& model, Complex k) {
  return model.radial() ? jost_derivative(model, k) : dispersion_derivative(model, k);
}

ScatteringData scattering_data(const PotentialModel& model, Complex k) {
  ScatteringData data;
  data.dispersion = dispersion(model, k);
  data.dispersion_derivative = dispersion_derivative(model, k);
  data.smatrix = model.radial() ? smatrix(model, k) : transmission_1d(model, k).transmission;
  return data;
}

Complex smatrix(const PotentialModel& model, Complex k) {
  require_radial(model, "smatrix");
  check_not_pole(model, k);
  return jost_function(model, -k) / jost_function(model, k);
}

Complex regular_solution(const PotentialModel& model, Complex k, double r) {
  require_radial(model, "regular_solution");
  const double range = model.range();
  if (model.kind() == ModelKind::RadialDeltaShell) {
    if (r <= range) return sin_over(k, r);
    const Complex value = sin_over(k, range);
    const Complex slope = std::cos(k * range) + model.strength() * value;
    return value * std::cos(k * (r - range)) + slope * sin_over(k, r - range);
  }
  const Complex q = channel_momentum(k, model.strength());
  if (r <= range) return sin_over(q, r);
  const Complex value = sin_over(q, range);
  const Complex slope = std::cos(q * range);
  return value * std::cos(k * (r - range)) + slope * sin_over(k, r - range);
}

Complex regular_solution_derivative(const PotentialModel& model, Complex k, double r) {
  require_radial(model, "regular_solution_derivative");
  const double range = model.range();
  if (model.kind() == ModelKind::RadialDeltaShell) {
    if (r < range) return std::cos(k * r);
    const Complex value = sin_over(k, range);
    const Complex slope = std::cos(k * range) + model.strength() * value;
    const double rho = r - range;
    return -value * (k * k) * sin_over(k, rho) + slope * std::cos(k * rho);
  }
  const Complex q = channel_momentum(k, model.strength());
  if (r < range) return std::cos(q * r);
  const Complex value = sin_over(q, range);
  const Complex slope = std::cos(q * range);
  const double rho = r - range;
  return -value * (k * k) * sin_over(k, rho) + slope * std::cos(k * rho);
}

Complex outgoing_solution(const PotentialModel& model, Complex k, double r) {
  require_radial(model, "outgoing_solution");
  const double range = model.range();
  if (r >= range) return std::exp(I * k * r);
  const Complex edge = std::exp(I * k * range);
  const double rho = r - range;
  if (model.kind() == ModelKind::RadialDeltaShell) {
    return edge * (std::cos(k * rho) + (I * k - model.strength()) * sin_over(k, rho));
  }
  const Complex q = channel_momentum(k, model.strength());
  return edge * (std::cos(q * rho) + I * k * sin_over(q, rho));
}

Complex green_outgoing(const PotentialModel& model, double r, double r_prime, Complex k) {
  require_radial(model, "green_outgoing");
  if (r < 0.0 || r_prime < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "radial coordinates must be non-negative");
  }
  check_not_pole(model, k);
  const double lo = std::min(r, r_prime);
  const double hi = std::max(r, r_prime);
  return -regular_solution(model, k, lo) * outgoing_solution(model, k, hi) / jost_function(model, k);
}

Amplitudes1D transmission_1d(const PotentialModel& model, Complex p, const PhysicalUnits& units) {
  require_1d(model, "transmission_1d");
  const Complex k = p / units.hbar;
  const LeftEdge edge = left_edge(model, k);
  const Complex denom = I * k * edge.value + edge.slope;
  if (std::abs(denom) < 1e-13 * std::max(1.0, std::abs(2.0 * k))) {
    throw Error(ErrorKind::PoleEvaluation, "momentum is a pole of the transmission amplitude");
  }
  return {2.0 * I * k / denom, (I * k * edge.value - edge.slope) / denom};
}

Complex scattering_wave(const PotentialModel& model, double k, double r, const PhysicalUnits& units) {
  if (!(k > 0.0)) throw Error(ErrorKind::NonPositiveK, "scattering states need k > 0");
  if (model.radial()) {
    return std::sqrt(2.0 / pi) * k * regular_solution(model, k, r) / jost_function(model, k);
  }
  const Complex kk = k;
  const double p = units.hbar * k;
  const double norm = 1.0 / std::sqrt(units.planck_h());
  const Amplitudes1D amp = transmission_1d(model, p, units);
  const double x = r;
  if (x <= 0.0) return norm * (std::exp(I * kk * x) + amp.reflection * std::exp(-I * kk * x));
  if (x >= model.range()) return norm * amp.transmission * std::exp(I * kk * x);
  // Inside the square barrier: continue the transmitted wave back from x = d.
  const double d = model.range();
  const Complex q = channel_momentum(kk, -model.strength());
  const Complex value = amp.transmission * std::exp(I * kk * d);
  const Complex slope = I * kk * value;
  return norm * (value * std::cos(q * (x - d)) + slope * sin_over(q, x - d));
}

}  // namespace gamowkit
