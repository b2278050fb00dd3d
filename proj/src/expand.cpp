#include "gamowkit/expand.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gamowkit/cerf.hpp"
#include "gamowkit/error.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/quadrature.hpp"

namespace gamowkit {

namespace {

constexpr double kClearance = 1e-3;

void require_radial(const PotentialModel& model, const char* what) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, std::string(what) + " needs a radial model");
}

void require_time(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive");
}

void check_clearance(const PotentialModel& model, Complex z0, Complex z1) {
  const Complex u = (z1 - z0) / std::abs(z1 - z0);
  const Complex n = I * u;
  const std::vector<Complex> tube = {z0 - kClearance * (u + n), z1 + kClearance * (u - n),
                                     z1 + kClearance * (u + n), z0 + kClearance * (n - u)};
  int inside = 0;
  try {
    inside = count_zeros_in_polygon(model, tube);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroOnBoundary) throw;
    inside = 1;
  }
  if (inside != 0) {
    throw Error(ErrorKind::PoleTooClose, "a pole lies within 1e-3 of the segment from " +
                                             format_number(z0.real()) + "+" +
                                             format_number(z0.imag()) + "i");
  }
}

Complex scattering_kernel(const PotentialModel& model, Complex k, double r, double r_prime) {
  return (2.0 / pi) * k * k * regular_solution(model, k, r) * regular_solution(model, k, r_prime) /
         (jost_function(model, k) * jost_function(model, -k));
}

Complex propagator_kernel(const PotentialModel& model, Complex k, double r, double r_prime, double t) {
  return green_outgoing(model, r, r_prime, k) * std::exp(-I * k * k * t) * 2.0 * k;
}

// int f(r) phi(k, r) dr over the support of f.
Complex bump_transform(const PotentialModel& model, const Bump& f, Complex k) {
  if (f.amplitude == 0.0) return 0.0;
  const double width = f.hi() - f.lo();
  const int panels = std::max(
      8, static_cast<int>(std::ceil((std::abs(k.real()) / 2.0 + std::abs(k.imag())) * width)));
  const CompositeRule rule = composite_gauss_legendre(f.lo(), f.hi(), panels, 16);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    sum += rule.weights[j] * f(rule.nodes[j]) * regular_solution(model, k, rule.nodes[j]);
  }
  return sum;
}

Complex bump_overlap(const GamowState& s, const Bump& f) {
  return f.amplitude == 0.0 ? Complex(0.0) : overlap_with_bump(s, f);
}

Complex m_value(Complex k, double t, TailMode mode) {
  return mode == TailMode::Subtracted ? m_function_subtracted(k, t) : m_function(k, t);
}

std::vector<StatePair> first_units(const std::vector<GamowState>& states, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  std::vector<StatePair> units = pair_states(states);
  if (static_cast<std::size_t>(n) > units.size()) {
    throw Error(ErrorKind::InvalidArgument, "asked for " + std::to_string(n) +
                                                " terms, only " + std::to_string(units.size()) +
                                                " are available");
  }
  units.resize(n);
  return units;
}

void require_interior(const std::vector<GamowState>& states, double r, double r_prime) {
  for (const auto& s : states) {
    if (r < 0.0 || r_prime < 0.0 || r >= s.range() || r_prime >= s.range()) {
      throw Error(ErrorKind::OutsideInteractionRegion,
                  "the pole expansion needs 0 <= r, r' < R (r = " + format_number(r) +
                      ", r' = " + format_number(r_prime) + ")");
    }
  }
}

void finish(PropagatorBreakdown& b) {
  Complex total = 0.0;
  for (const auto& term : b.bound_terms) total += term.value;
  for (const auto& term : b.pole_terms) total += term.value;
  b.total = total + b.background;
}

QuadratureOptions tight() {
  QuadratureOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-13;
  o.max_intervals = 20000;
  return o;
}

}  // namespace

std::string_view to_string(ContourLabel label) noexcept {
  switch (label) {
    case ContourLabel::GammaB: return "gamma_b";
    case ContourLabel::GammaM: return "gamma_m";
    case ContourLabel::C0: return "c0";
    case ContourLabel::CL: return "c_l";
    case ContourLabel::RealAxis: return "real_axis";
    case ContourLabel::Custom: return "custom";
  }
  return "custom";
}

Contour Contour::real_axis(double k_max) {
  if (!(k_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "k_max must be positive");
  return {{0.0, k_max}, false, ContourLabel::RealAxis};
}

Contour Contour::berggren(double depth, double re_turn, double k_max, ContourLabel label) {
  if (!(depth > 0.0) || !(re_turn > depth) || !(k_max > re_turn + depth)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 < depth < re_turn and re_turn + depth < k_max");
  }
  return {{0.0, Complex(depth, -depth), Complex(re_turn, -depth), Complex(re_turn + depth, 0.0),
           Complex(k_max, 0.0)},
          false,
          label};
}

Contour Contour::c_l(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const Complex dir = std::exp(Complex(0.0, -pi / 4.0));
  return {{-radius * dir, 0.0, radius * dir}, false, ContourLabel::CL};
}

Contour Contour::c0(double c, double reach) {
  if (!(c > 0.0) || !(reach > 0.0)) throw Error(ErrorKind::InvalidArgument, "c0 needs c, reach > 0");
  const Complex bend(c, c);
  return {{bend + reach * std::exp(Complex(0.0, 0.75 * pi)), bend,
           bend + reach * std::exp(Complex(0.0, -0.25 * pi))},
          false,
          ContourLabel::C0};
}

Contour Contour::circle(Complex center, double radius, int sides) {
  if (!(radius > 0.0) || sides < 3) throw Error(ErrorKind::InvalidArgument, "bad circle");
  Contour c;
  c.closed = true;
  c.label = ContourLabel::Custom;
  for (int j = 0; j < sides; ++j) {
    c.vertices.push_back(center + radius * std::exp(I * (2.0 * pi * j / sides)));
  }
  return c;
}

bool contour_encloses(const Contour& contour, Complex k) {
  const auto& v = contour.vertices;
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const bool crosses = (v[i].imag() > k.imag()) != (v[j].imag() > k.imag());
    if (crosses) {
      const double x = v[j].real() + (k.imag() - v[j].imag()) * (v[i].real() - v[j].real()) /
                                         (v[i].imag() - v[j].imag());
      if (k.real() < x) inside = !inside;
    }
  }
  return inside;
}

ContourIntegral contour_integral(const PotentialModel& model, IntegrandKind kind,
                                 const Contour& contour, double r, double r_prime, double t) {
  require_radial(model, "contour_integral");
  if (kind == IntegrandKind::PropagatorKernel) require_time(t);
  if (contour.vertices.size() < 2) throw Error(ErrorKind::InvalidArgument, "contour needs two vertices");
  auto f = [&](Complex k) {
    return kind == IntegrandKind::ScatteringKernel ? scattering_kernel(model, k, r, r_prime)
                                                   : propagator_kernel(model, k, r, r_prime, t);
  };
  ContourIntegral out;
  for (std::size_t s = 0; s < contour.segments(); ++s) {
    const Complex z0 = contour.vertices[s];
    const Complex z1 = contour.vertices[(s + 1) % contour.vertices.size()];
    if (z0 == z1) throw Error(ErrorKind::InvalidArgument, "consecutive contour vertices coincide");
    check_clearance(model, z0, z1);
    const QuadratureResult q = integrate_segment(f, z0, z1, tight());
    out.value += q.value;
    out.error += q.error;
  }
  if (!(out.error < 1e-9)) {
    throw Error(ErrorKind::NoConvergence, "contour quadrature error " + format_number(out.error));
  }
  return out;
}

Complex propagator_along_c0(const PotentialModel& model, double r, double r_prime, double t) {
  require_radial(model, "propagator_along_c0");
  require_time(t);
  double kappa_max = 0.0;
  for (const auto& b : bound_states(model)) kappa_max = std::max(kappa_max, b.k.imag());
  const double c = 1.0 + kappa_max;
  const double reach = 2.0 * c + std::max(10.0, 7.0 / std::sqrt(t));
  const Contour path = Contour::c0(c, reach);
  Complex g = I / (2.0 * pi) * contour_integral(model, IntegrandKind::PropagatorKernel, path, r,
                                                r_prime, t).value;
  // Fourth-quadrant poles above the lower ray (Re k + Im k > 2c) were swept
  // over; their residues fall off like exp(2 Re k Im k t), so the search
  // proceeds in chunks of Re k until a chunk adds nothing.
  const double l = model.range();
  const double width = std::max(reach / std::sqrt(2.0), 4.0 * pi / l);
  const RadialGrid grid = make_radial_grid(model);
  double lo = c;
  for (int chunk = 0; chunk < 400; ++chunk, lo += width) {
    SearchRegion box;
    box.re_min = lo;
    box.re_max = lo + width;
    box.im_min = std::max(2.0 * c - box.re_max, -30.0 / l);
    box.im_max = -1e-9;
    if (!(box.im_min < box.im_max)) box.im_min = box.im_max - 1.0 / l;
    Complex added = 0.0;
    for (const auto& p : find_poles(model, box)) {
      if (p.cls != PoleClass::Resonance || p.k.real() + p.k.imag() <= 2.0 * c) continue;
      const GamowState s = normalize_gamow(solve_gamow(model, p, grid));
      added += s.at(r) * s.at(r_prime) * std::exp(-I * p.k * p.k * t);
    }
    g += added;
    if (chunk >= 2 && std::abs(added) < 1e-16 * std::max(1.0, std::abs(g))) return g;
  }
  throw Error(ErrorKind::NoConvergence, "swept pole residues do not decay");
}

BerggrenResult berggren_identity(const PotentialModel& model, const Bump& f, const Bump& g,
                                 const Contour& contour, BerggrenWeight weight,
                                 double support_cut) {
  require_radial(model, "berggren_identity");
  const double cut = support_cut > 0.0 ? support_cut : model.range();
  for (const Bump* b : {&f, &g}) {
    if (b->lo() < 0.0 || b->hi() > cut || !(b->half_width > 0.0)) {
      throw Error(ErrorKind::UnsupportedTestFunction,
                  "test function support [" + format_number(b->lo()) + ", " +
                      format_number(b->hi()) + "] leaves [0, " + format_number(cut) + "]");
    }
  }
  if (contour.closed || contour.vertices.size() < 2 || contour.vertices.front() != Complex(0.0) ||
      contour.vertices.back().imag() != 0.0 || !(contour.vertices.back().real() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Berggren contour must run from 0 to a point on the real axis");
  }
  const bool hamiltonian = weight == BerggrenWeight::Hamiltonian;
  BerggrenResult out;

  // Direct value.
  {
    const double lo = std::max(f.lo(), g.lo());
    const double hi = std::min(f.hi(), g.hi());
    double exact = 0.0;
    if (hi > lo) {
      const CompositeRule rule = composite_gauss_legendre(lo, hi, 64, 16);
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        exact += rule.weights[j] *
                 (hamiltonian ? f.derivative(x) * g.derivative(x) + model.smooth_potential(x) * f(x) * g(x)
                              : f(x) * g(x));
      }
      if (hamiltonian && model.has_delta()) {
        exact += model.strength() * f(model.delta_position()) * g(model.delta_position());
      }
    }
    out.exact = exact;
  }

  const RadialGrid grid = make_radial_grid(model);
  for (const auto& p : bound_states(model)) {
    const GamowState s = normalize_gamow(solve_gamow(model, p, grid));
    const Complex w = hamiltonian ? p.k * p.k : Complex(1.0);
    out.bound_part += w * bump_overlap(s, f) * bump_overlap(s, g);
  }

  double re_min = 0.0, re_max = 0.0, im_min = 0.0;
  for (const auto& v : contour.vertices) {
    re_max = std::max(re_max, v.real());
    im_min = std::min(im_min, v.imag());
  }
  if (im_min < 0.0) {
    SearchRegion box{re_min + 1e-9, re_max, im_min, -1e-9};
    for (const auto& p : find_poles(model, box)) {
      if (p.cls != PoleClass::Resonance || !contour_encloses(contour, p.k)) continue;
      const GamowState s = normalize_gamow(solve_gamow(model, p, grid));
      const Complex lf = bump_overlap(s, f);
      const Complex rg = bump_overlap(s, g);
      const Complex w = hamiltonian ? p.k * p.k : Complex(1.0);
      out.enclosed.push_back(p);
      out.left_overlaps.push_back(lf);
      out.right_overlaps.push_back(rg);
      out.resonance_part += w * lf * rg;
    }
  }
  out.n_resonances = static_cast<int>(out.enclosed.size());

  auto kernel = [&](Complex k) {
    const Complex w = hamiltonian ? k * k : Complex(1.0);
    return w * (2.0 / pi) * k * k * bump_transform(model, f, k) * bump_transform(model, g, k) /
           (jost_function(model, k) * jost_function(model, -k));
  };
  QuadratureOptions opts = tight();
  opts.abs_tol = 1e-11;
  for (std::size_t s = 0; s + 1 < contour.vertices.size(); ++s) {
    const Complex z0 = contour.vertices[s];
    const Complex z1 = contour.vertices[s + 1];
    check_clearance(model, z0, z1);
    const QuadratureResult q = integrate_segment(kernel, z0, z1, opts);
    out.background += q.value;
    out.background_error += q.error;
  }
  // Real-axis tail to infinity in doubling chunks.
  double a = contour.vertices.back().real();
  for (int chunk = 0; chunk < 40; ++chunk) {
    const double b = 2.0 * a;
    const QuadratureResult q = integrate_segment(kernel, a, b, opts);
    out.background += q.value;
    out.background_error += q.error;
    a = b;
    if (std::abs(q.value) < 1e-13 && chunk >= 1) break;
    if (chunk == 39) throw Error(ErrorKind::NoConvergence, "background tail does not decay");
  }
  out.reconstructed = out.bound_part + out.resonance_part + out.background;
  return out;
}

double background_divergence_probe(const PotentialModel& model, const Bump& f, const Bump& g,
                                   double arc_radius, int samples) {
  require_radial(model, "background_divergence_probe");
  if (!(arc_radius > 0.0) || samples < 2) throw Error(ErrorKind::InvalidArgument, "bad probe arc");
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double theta = -0.5 * pi * j / (samples - 1);
    const Complex k = arc_radius * std::exp(I * theta);
    const Complex value = (2.0 / pi) * k * k * bump_transform(model, f, k) *
                          bump_transform(model, g, k) /
                          (jost_function(model, k) * jost_function(model, -k));
    if (std::isfinite(std::abs(value))) worst = std::max(worst, std::abs(value));
  }
  return worst;
}

PropagatorBreakdown propagator_full(const std::vector<GamowState>& states, double r,
                                    double r_prime, double t, int n_pairs, TailMode mode) {
  require_time(t);
  require_interior(states, r, r_prime);
  PropagatorBreakdown b;
  b.t = t;
  b.r = r;
  b.r_prime = r_prime;
  const auto units = first_units(states, n_pairs);
  Complex last = 0.0;
  for (const auto& unit : units) {
    Complex unit_sum = 0.0;
    auto add = [&](const GamowState& s) {
      const Complex term = s.at(r) * s.at(r_prime) * m_value(s.pole.k, t, mode);
      unit_sum += term;
      if (s.pole.cls == PoleClass::Bound) {
        b.bound_terms.push_back({s.pole, term});
        b.bound_states_included = true;
      } else {
        b.pole_terms.push_back({s.pole, term});
      }
    };
    add(states[unit.first]);
    if (unit.partner) add(states[*unit.partner]);
    last = unit_sum;
  }
  b.n_terms = static_cast<int>(units.size());
  b.truncation_estimate = std::abs(last);
  finish(b);
  b.nonexponential_part = b.total;
  return b;
}

PropagatorBreakdown propagator_proper_form(const std::vector<GamowState>& states, double r,
                                           double r_prime, double t, int n_pairs, TailMode mode) {
  require_time(t);
  require_interior(states, r, r_prime);
  PropagatorBreakdown b;
  b.t = t;
  b.r = r;
  b.r_prime = r_prime;
  const auto units = first_units(states, n_pairs);
  Complex last = 0.0;
  for (const auto& unit : units) {
    const GamowState& s = states[unit.first];
    const Complex k = s.pole.k;
    const Complex y = MArgument::make(k, t).y;
    const double arg = std::arg(y) < 0.0 ? std::arg(y) + 2.0 * pi : std::arg(y);
    if (!(arg > 0.5 * pi && arg < 1.5 * pi)) {
      throw Error(ErrorKind::ImproperPoleInExponentialPath,
                  "pole at k = " + format_number(k.real()) + " " + format_number(k.imag()) +
                      "i is outside the sector pi/2 < arg y < 3 pi/2");
    }
    const Complex uu = s.at(r) * s.at(r_prime);
    const Complex exponential = uu * std::exp(-I * k * k * t);
    const Complex term = exponential - uu * m_value(-k, t, mode);
    b.exponential_part += exponential;
    Complex unit_sum = term;
    if (s.pole.cls == PoleClass::Bound) {
      b.bound_terms.push_back({s.pole, term});
      b.bound_states_included = true;
    } else {
      b.pole_terms.push_back({s.pole, term});
    }
    if (unit.partner) {
      const GamowState& m = states[*unit.partner];
      const Complex mirror = m.at(r) * m.at(r_prime) * m_value(m.pole.k, t, mode);
      b.pole_terms.push_back({m.pole, mirror});
      unit_sum += mirror;
    }
    last = unit_sum;
  }
  b.n_terms = static_cast<int>(units.size());
  b.truncation_estimate = std::abs(last);
  finish(b);
  b.nonexponential_part = b.total - b.exponential_part;
  return b;
}

ContourIntegral cl_background(const PotentialModel& model, double r, double r_prime, double t,
                              const BackgroundOptions& options) {
  require_radial(model, "cl_background");
  require_time(t);
  if (r < 0.0 || r_prime < 0.0) throw Error(ErrorKind::InvalidArgument, "r, r' must be >= 0");
  const Complex dir = std::exp(Complex(0.0, -pi / 4.0));
  auto integrand = [&](double s) {
    const Complex k = s * dir;
    return I / (2.0 * pi) * propagator_kernel(model, k, r, r_prime, t) * dir;
  };
  double radius = options.radius > 0.0 ? options.radius : std::max(10.0, 6.0 / std::sqrt(t));
  QuadratureOptions opts = tight();
  opts.abs_tol = options.abs_tol;
  for (int attempt = 0; attempt <= options.max_extensions; ++attempt, radius *= 2.0) {
    const double edge = std::max(std::abs(integrand(radius)), std::abs(integrand(-radius)));
    if (edge * radius > options.abs_tol) continue;
    const QuadratureResult lo = integrate_gk15(integrand, -radius, 0.0, opts);
    const QuadratureResult hi = integrate_gk15(integrand, 0.0, radius, opts);
    if (!lo.converged || !hi.converged) continue;
    return {lo.value + hi.value, lo.error + hi.error};
  }
  throw Error(ErrorKind::NoConvergence, "C_L background needs a radius beyond " +
                                            format_number(radius / 2.0));
}

PropagatorBreakdown propagator_proper_plus_background(const PotentialModel& model,
                                                      const std::vector<GamowState>& states,
                                                      double r, double r_prime, double t,
                                                      const BackgroundOptions& options) {
  require_time(t);
  PropagatorBreakdown b;
  b.t = t;
  b.r = r;
  b.r_prime = r_prime;
  for (const auto& s : states) {
    const bool bound = s.pole.cls == PoleClass::Bound;
    if (!bound && !s.pole.proper) continue;
    const Complex k = s.pole.k;
    const Complex term = s.at(r) * s.at(r_prime) * std::exp(-I * k * k * t);
    if (bound) {
      b.bound_terms.push_back({s.pole, term});
      b.bound_states_included = true;
    } else {
      b.pole_terms.push_back({s.pole, term});
      b.truncation_estimate = std::abs(term);
    }
    b.exponential_part += term;
  }
  b.n_terms = static_cast<int>(b.pole_terms.size() + b.bound_terms.size());
  b.background = cl_background(model, r, r_prime, t, options).value;
  finish(b);
  b.nonexponential_part = b.background;
  return b;
}

Complex survival_amplitude(const std::vector<GamowState>& states, const Bump& psi, double t,
                           int n_pairs, TailMode mode) {
  require_time(t);
  const auto units = first_units(states, n_pairs);
  Complex sum = 0.0;
  auto add = [&](const GamowState& s) {
    const Complex c = overlap_with_bump(s, psi);
    sum += c * c * m_value(s.pole.k, t, mode);
  };
  for (const auto& unit : units) {
    add(states[unit.first]);
    if (unit.partner) add(states[*unit.partner]);
  }
  return sum;
}

std::vector<Complex> EffectiveHamiltonian::eigenvalues() const {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < dimension(); ++i) out.push_back((*this)(i, i));
  return out;
}

Complex EffectiveHamiltonian::matrix_element(const std::vector<Complex>& left,
                                             const std::vector<Complex>& right) const {
  if (left.size() != dimension() || right.size() != dimension()) {
    throw Error(ErrorKind::InvalidArgument, "overlap vectors do not match the dimension");
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    for (std::size_t j = 0; j < dimension(); ++j) sum += left[i] * (*this)(i, j) * right[j];
  }
  return sum;
}

EffectiveHamiltonian effective_hamiltonian(const std::vector<PoleRecord>& poles) {
  if (poles.empty()) throw Error(ErrorKind::EmptySelection, "no poles selected");
  EffectiveHamiltonian h;
  h.poles = poles;
  const std::size_t n = poles.size();
  h.matrix.assign(n * n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) h.matrix[i * n + i] = poles[i].k * poles[i].k;
  return h;
}

std::string breakdowns_to_csv(const std::vector<PropagatorBreakdown>& rows) {
  CsvTable table({"t", "r", "r_prime", "re_total", "im_total", "re_background", "im_background",
                  "n_terms", "truncation_estimate"});
  for (const auto& b : rows) {
    table.add_row({format_number(b.t), format_number(b.r), format_number(b.r_prime),
                   format_number(b.total.real()), format_number(b.total.imag()),
                   format_number(b.background.real()), format_number(b.background.imag()),
                   std::to_string(b.n_terms), format_number(b.truncation_estimate)});
  }
  return table.str();
}

}  // namespace gamowkit
