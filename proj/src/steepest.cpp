#include "gamowkit/steepest.hpp"

#include <algorithm>
#include <cmath>

#include "gamowkit/cerf.hpp"
#include "gamowkit/error.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/quadrature.hpp"

namespace gamowkit {

namespace {

void check_units(const PhysicalUnits& units) {
  if (!(units.mass > 0.0) || !(units.hbar > 0.0) || !std::isfinite(units.mass) ||
      !std::isfinite(units.hbar)) {
    throw Error(ErrorKind::NonFiniteParameter, "mass and hbar must be positive and finite");
  }
}

// Poles of T(p): zeros of D(k) = 2ik / T(k) at p = hbar k.
std::vector<Complex> transmission_poles(const PotentialModel& model, const PhysicalUnits& units) {
  switch (model.kind()) {
    case ModelKind::Barrier1DDelta:
      if (model.strength() == 0.0) return {};
      return {units.hbar * Complex(0.0, -0.5 * model.strength())};
    case ModelKind::Barrier1DSquare:
      throw Error(ErrorKind::NonMeromorphicIntegrand,
                  "square barrier transmission carries channel momenta; only the delta barrier is supported");
    default:
      throw Error(ErrorKind::WrongModelKind, "transmitted waves need a 1D model");
  }
}

}  // namespace

WavePacketSpec WavePacketSpec::cutoff(double k0, double x0, PhysicalUnits units) {
  WavePacketSpec s;
  s.kind = PacketKind::CutoffPlaneWave;
  s.k0 = k0;
  s.x0 = x0;
  s.units = units;
  s.validate();
  return s;
}

WavePacketSpec WavePacketSpec::gaussian(double k0, double x0, double sigma, PhysicalUnits units) {
  WavePacketSpec s;
  s.kind = PacketKind::Gaussian;
  s.k0 = k0;
  s.x0 = x0;
  s.sigma = sigma;
  s.units = units;
  s.validate();
  return s;
}

void WavePacketSpec::validate() const {
  check_units(units);
  if (!std::isfinite(k0) || !std::isfinite(x0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::NonFiniteParameter, "packet parameters must be finite");
  }
  if (kind == PacketKind::CutoffPlaneWave) {
    if (x0 > 0.0) throw Error(ErrorKind::InvalidArgument, "cutoff edge must satisfy x0 <= 0");
    if (!(k0 > 0.0)) throw Error(ErrorKind::NonPositiveK, "cutoff wave needs k0 > 0");
  } else {
    if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian width must be positive");
    if (!(x0 + 6.0 * sigma < 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "Gaussian packet must satisfy x0 + 6 sigma < 0");
    }
  }
}

std::string_view to_string(PacketKind kind) noexcept {
  return kind == PacketKind::CutoffPlaneWave ? "cutoff" : "gaussian";
}

PacketKind parse_packet_kind(std::string_view name) {
  if (name == "cutoff") return PacketKind::CutoffPlaneWave;
  if (name == "gaussian") return PacketKind::Gaussian;
  throw Error(ErrorKind::InvalidArgument, "unknown packet kind '" + std::string(name) + "'");
}

Complex momentum_amplitude(const WavePacketSpec& spec, Complex p) {
  const double hbar = spec.units.hbar;
  const double norm = 1.0 / std::sqrt(spec.units.planck_h());
  if (spec.kind == PacketKind::CutoffPlaneWave) {
    const Complex pole = hbar * spec.k0;
    if (p == pole) throw Error(ErrorKind::PoleEvaluation, "p is the pole of the cutoff transform");
    return norm * I * hbar * std::exp(I * (pole - p) * spec.x0 / hbar) / (p - pole);
  }
  const Complex q = p / hbar - spec.k0;
  return norm * std::exp(-I * p * spec.x0 / hbar) * std::pow(8.0 * pi * spec.sigma * spec.sigma, 0.25) *
         std::exp(-spec.sigma * spec.sigma * q * q);
}

Complex momentum_amplitude_residue(const WavePacketSpec& spec) {
  if (spec.kind != PacketKind::CutoffPlaneWave) {
    throw Error(ErrorKind::InvalidArgument, "only the cutoff wave has a pole");
  }
  return I * spec.units.hbar / std::sqrt(spec.units.planck_h());
}

Complex initial_wave(const WavePacketSpec& spec, double x) {
  if (spec.kind == PacketKind::CutoffPlaneWave) {
    return x < spec.x0 ? std::exp(I * (spec.k0 * x)) : Complex(0.0);
  }
  const double y = x - spec.x0;
  return std::pow(2.0 * pi * spec.sigma * spec.sigma, -0.25) *
         std::exp(Complex(-y * y / (4.0 * spec.sigma * spec.sigma), spec.k0 * y));
}

SaddleData SaddleData::make(const WavePacketSpec& spec, double x, double t) {
  check_units(spec.units);
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive");
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteParameter, "x must be finite");
  const double m = spec.units.mass;
  const double hbar = spec.units.hbar;
  SaddleData s;
  s.a = t / (2.0 * m * hbar);
  s.b = -(x - spec.x0) / hbar;
  s.saddle = -s.b / (2.0 * s.a);
  s.f = Complex(1.0, -1.0) * std::sqrt(m * hbar / t);
  s.theta = s.b * s.b / (4.0 * s.a);
  return s;
}

Complex PoleSplit::H(Complex u) const {
  Complex value = G(u);
  for (const auto& pole : poles) value -= (pole.A / f) / (u - pole.u);
  return value;
}

Complex transmitted_integrand(const PotentialModel& model, const WavePacketSpec& spec, Complex p) {
  if (model.radial()) throw Error(ErrorKind::WrongModelKind, "transmitted waves need a 1D model");
  const Complex shift = std::exp(I * p * spec.x0 / spec.units.hbar);
  return transmission_1d(model, p, spec.units).transmission * momentum_amplitude(spec, p) * shift /
         std::sqrt(spec.units.planck_h());
}

PoleSplit pole_remainder_split(const PotentialModel& model, const WavePacketSpec& spec,
                               const SaddleData& saddle, int pole_budget) {
  spec.validate();
  const double hbar = spec.units.hbar;
  const double root_h = std::sqrt(spec.units.planck_h());
  PoleSplit split;
  split.f = saddle.f;
  split.G = [model, spec, saddle](Complex u) {
    return transmitted_integrand(model, spec, saddle.p_of(u));
  };
  // Residue of g at a pole of T: h^{-1/2} hbar Res_k T(k) phi(p) exp(i p x0 / hbar).
  for (Complex p : transmission_poles(model, spec.units)) {
    const Complex k = p / hbar;
    const Complex res_t = hbar * 2.0 * I * k / dispersion_derivative(model, k);
    const Complex rest = momentum_amplitude(spec, p) * std::exp(I * p * spec.x0 / hbar) / root_h;
    split.poles.push_back({p, saddle.u_of(p), res_t * rest});
  }
  if (spec.kind == PacketKind::CutoffPlaneWave) {
    const Complex p = hbar * spec.k0;
    const Complex t = transmission_1d(model, p, spec.units).transmission;
    const Complex res = momentum_amplitude_residue(spec) * std::exp(I * spec.k0 * spec.x0) / root_h;
    split.poles.push_back({p, saddle.u_of(p), t * res});
  }
  if (static_cast<int>(split.poles.size()) > pole_budget) {
    throw Error(ErrorKind::PoleBudgetExceeded,
                std::to_string(split.poles.size()) + " poles exceed the budget " + std::to_string(pole_budget));
  }
  std::stable_sort(split.poles.begin(), split.poles.end(),
                   [](const SplitPole& l, const SplitPole& r) { return std::abs(l.u) < std::abs(r.u); });
  return split;
}

namespace {

// Along the real u axis the integral of exp(-u^2)/(u - u_j) is i pi w(u_j)
// above it and -i pi w(-u_j) below it. The original contour keeps every pole
// on its right, so a pole above the axis was crossed and its residue
// 2 pi i exp(-u_j^2) is taken back out. By w(-u) = 2 exp(-u^2) - w(u) both
// forms are one entire function of u_j; the branch only picks the one that
// avoids cancellation.
Complex pole_sum(const PoleSplit& split, const SaddleData& saddle, bool allow_on_path) {
  Complex sum = 0.0;
  for (const auto& pole : split.poles) {
    const Complex u = pole.u;
    if (!allow_on_path && std::abs(u.imag()) <= 1e-12) {
      throw Error(ErrorKind::PoleOnPath, "pole on the steepest descent path");
    }
    const Complex term = u.imag() > 0.0 ? I * pi * faddeeva(u) - 2.0 * pi * I * std::exp(-u * u)
                                        : -I * pi * faddeeva(-u);
    sum += pole.A * term;
  }
  return saddle.prefactor() * sum;
}

}  // namespace

Complex pole_contribution(const PoleSplit& split, const SaddleData& saddle) {
  return pole_sum(split, saddle, false);
}

double series_weight(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "series index must be >= 0");
  double w = 1.0;
  for (int j = 1; j <= n; ++j) w *= (2.0 * j - 1.0) / (2.0 * (2.0 * j - 1.0) * (2.0 * j));
  return w;
}

Complex remainder_contribution(const PoleSplit& split, const SaddleData& saddle, int n_max,
                               int* terms_used) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0");
  constexpr int nodes = 64;
  if (2 * n_max >= nodes / 2) {
    throw Error(ErrorKind::InvalidArgument, "n_max too large for the 64-node Cauchy circle");
  }
  std::vector<Complex> h(nodes);
  double noise = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex u = std::exp(I * (2.0 * pi * (j + 0.5) / nodes));
    h[j] = split.H(u);
    noise = std::max(noise, 1e-13 * std::abs(split.G(u)));
  }
  // series_weight(n) H^{(2n)}(0) = (2n - 1)!! / 2^n * [u^{2n}] H. Coefficients
  // at the round-off level of G are dropped from the tail.
  std::vector<Complex> coefficients(n_max + 1);
  int used = 0;
  for (int n = 0; n <= n_max; ++n) {
    Complex c = 0.0;
    for (int j = 0; j < nodes; ++j) c += h[j] * std::exp(-I * (2.0 * pi * (j + 0.5) * 2.0 * n / nodes));
    coefficients[n] = c / static_cast<double>(nodes);
    if (std::abs(coefficients[n]) > noise) used = n + 1;
  }
  Complex sum = 0.0;
  double previous = -1.0;
  int growth = 0;
  double dfact = 1.0;
  for (int n = 0; n < used; ++n) {
    if (n > 0) dfact *= (2.0 * n - 1.0) / 2.0;
    const Complex term = dfact * coefficients[n];
    const double size = std::abs(term);
    growth = (previous >= 0.0 && size > previous && size > noise * dfact) ? growth + 1 : 0;
    if (growth >= 2) {
      throw Error(ErrorKind::SeriesDiverging, "remainder series terms grow at n = " + std::to_string(n));
    }
    previous = size;
    sum += term;
  }
  if (terms_used != nullptr) *terms_used = used;
  return saddle.prefactor() * saddle.f * std::sqrt(pi) * sum;
}

TransmittedWave transmitted_wave(const PotentialModel& model, const WavePacketSpec& spec, double x,
                                 double t, int n_max) {
  if (model.radial()) throw Error(ErrorKind::WrongModelKind, "transmitted waves need a 1D model");
  if (!(x >= model.range())) {
    throw Error(ErrorKind::InvalidArgument, "x must lie right of the potential");
  }
  const SaddleData saddle = SaddleData::make(spec, x, t);
  const PoleSplit split = pole_remainder_split(model, spec, saddle);
  TransmittedWave out;
  out.x = x;
  out.t = t;
  // A pole exactly on the path is harmless here: the original contour passes
  // above it and the pole term is continuous across the path.
  out.i_prime = pole_sum(split, saddle, true);
  out.i_doubleprime = remainder_contribution(split, saddle, n_max, &out.n_series_terms);
  out.psi = out.i_prime + out.i_doubleprime;
  out.n_poles = static_cast<int>(split.poles.size());
  return out;
}

Complex transmitted_wave_quadrature(const PotentialModel& model, const WavePacketSpec& spec, double x,
                                    double t, double lift) {
  if (model.radial()) throw Error(ErrorKind::WrongModelKind, "transmitted waves need a 1D model");
  if (!(lift > 0.0)) throw Error(ErrorKind::InvalidArgument, "lift must be positive");
  const SaddleData saddle = SaddleData::make(spec, x, t);
  const PoleSplit split = pole_remainder_split(model, spec, saddle, 1 << 20);
  double top = -1.0;
  double half_width = 1.0;
  for (const auto& pole : split.poles) {
    if (pole.u.imag() > -lift) {
      top = std::max(top, pole.u.imag() + lift);
      half_width = std::max(half_width, std::abs(pole.u.real()) + 1.0);
    }
  }
  const double reach = half_width + 8.0 + std::max(top, 0.0);
  std::vector<Complex> path{-reach};
  if (top > 0.0) {
    path.push_back(Complex(-half_width, top));
    path.push_back(Complex(half_width, top));
  }
  path.push_back(reach);
  auto integrand = [&](Complex u) { return std::exp(-u * u) * split.G(u); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20000;
  Complex sum = 0.0;
  double error = 0.0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const QuadratureResult q = integrate_segment(integrand, path[s], path[s + 1], opts);
    sum += q.value;
    error += q.error;
  }
  const Complex value = saddle.prefactor() * saddle.f * sum;
  if (!(error * std::abs(saddle.f) < 1e-9 * std::max(1.0, std::abs(value)))) {
    throw Error(ErrorKind::NoConvergence, "transmitted-wave quadrature error " + format_number(error));
  }
  return value;
}

std::string transmitted_to_csv(const std::vector<TransmittedWave>& rows) {
  CsvTable table({"x", "t", "re_psi", "im_psi", "abs2", "i_prime_abs", "i_doubleprime_abs", "n_poles",
                  "n_series_terms"});
  for (const auto& r : rows) {
    table.add_row({format_number(r.x), format_number(r.t), format_number(r.psi.real()),
                   format_number(r.psi.imag()), format_number(std::norm(r.psi)),
                   format_number(std::abs(r.i_prime)), format_number(std::abs(r.i_doubleprime)),
                   std::to_string(r.n_poles), std::to_string(r.n_series_terms)});
  }
  return table.str();
}

}  // namespace gamowkit
