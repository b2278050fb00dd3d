#include "gamowkit/gamow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gamowkit/error.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/quadrature.hpp"

namespace gamowkit {

namespace {

// int_0^R (sin(qr)/q)^2 dr, or nothing when |qR| is too small for the closed form.
std::optional<Complex> sin_square_integral(Complex q, double range) {
  if (std::abs(q * range) < 0.1) return std::nullopt;
  return (range / 2.0 - std::sin(2.0 * q * range) / (4.0 * q)) / (q * q);
}

void require_interior(const GamowState& s, double r, const char* what) {
  if (r < 0.0 || r >= s.range()) {
    throw Error(ErrorKind::OutsideInteractionRegion,
                std::string(what) + " needs 0 <= r < R, got r = " + format_number(r));
  }
}

Complex unit_term(const std::vector<GamowState>& states, const StatePair& unit,
                  const auto& term) {
  Complex sum = term(states[unit.first]);
  if (unit.partner) sum += term(states[*unit.partner]);
  return sum;
}

std::vector<StatePair> leading_units(const std::vector<GamowState>& states, int n) {
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

}  // namespace

RadialGrid make_radial_grid(const PotentialModel& model, int panels, int order) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, "radial grids need a radial model");
  if (panels < 1 || order < 1) throw Error(ErrorKind::InvalidArgument, "grid needs panels and order >= 1");
  const CompositeRule rule = composite_gauss_legendre(0.0, model.range(), panels, order);
  return {rule.nodes, rule.weights};
}

Complex GamowState::at(double r) const {
  if (r >= model_range_) return tail_coefficient * std::exp(I * pole.k * r);
  return scale * regular_solution(model_, pole.k, r);
}

Complex GamowState::norm_integral() const {
  const double range = model_range_;
  const Complex k = pole.k;
  const Complex q = model_.kind() == ModelKind::RadialDeltaShell
                        ? k
                        : std::sqrt(k * k + model_.strength());
  const auto closed = sin_square_integral(q, range);
  if (!closed) return norm_integral_quadrature();
  const Complex edge = at(range);
  return scale * scale * *closed + I * edge * edge / (2.0 * k);
}

Complex GamowState::norm_integral_quadrature() const {
  Complex sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += grid.weights[j] * u[j] * u[j];
  const Complex edge = at(model_range_);
  return sum + I * edge * edge / (2.0 * pole.k);
}

GamowState GamowState::scaled(Complex factor, bool now_normalized) const {
  GamowState out = *this;
  for (auto& v : out.u) v *= factor;
  out.scale *= factor;
  out.tail_coefficient *= factor;
  out.normalized = now_normalized;
  return out;
}

GamowState solve_gamow(const PotentialModel& model, const PoleRecord& pole, const RadialGrid& grid) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, "Gamow states need a radial model");
  const Complex k = pole.k;
  const double residual = std::abs(dispersion(model, k));
  if (!(residual < pole_residual_tolerance(model, k))) {
    throw Error(ErrorKind::NotAPole, "|D(k)| = " + format_number(residual) + " at the given k");
  }
  GamowState state(model);
  state.pole = pole;
  state.grid = grid;
  state.u.reserve(grid.nodes.size());
  for (double r : grid.nodes) state.u.push_back(regular_solution(model, k, r));
  const double range = model.range();
  const Complex edge = regular_solution(model, k, range);
  const Complex slope = regular_solution_derivative(model, k, range);
  state.tail_coefficient = edge * std::exp(-I * k * range);
  const double denom = std::max(std::abs(k * edge), 1e-300);
  state.matching_defect = std::abs(slope - I * k * edge) / denom;
  return state;
}

GamowState normalize_gamow(const GamowState& state) {
  if (state.normalized) return state;
  const Complex integral = state.norm_integral();
  if (std::abs(integral) < 1e-12) {
    throw Error(ErrorKind::DegenerateNorm, "normalization integral vanishes");
  }
  Complex n = std::sqrt(1.0 / integral);
  if (n.real() < 0.0 || (n.real() == 0.0 && n.imag() < 0.0)) n = -n;
  return state.scaled(n, true);
}

GamowState mirror_state(const GamowState& state) {
  GamowState out = state;
  out.pole = mirror_pole(state.model(), state.pole);
  for (auto& v : out.u) v = std::conj(v);
  out.scale = std::conj(state.scale);
  out.tail_coefficient = std::conj(state.tail_coefficient);
  return out;
}

std::vector<GamowState> paired_states(const PotentialModel& model,
                                      const std::vector<PoleRecord>& poles,
                                      const RadialGrid& grid) {
  std::vector<GamowState> states;
  for (const auto& p : poles) {
    GamowState s = normalize_gamow(solve_gamow(model, p, grid));
    const bool needs_partner = p.cls == PoleClass::Resonance;
    states.push_back(s);
    if (needs_partner) states.push_back(mirror_state(s));
  }
  return states;
}

double residue_circle_radius(const GamowState& state) {
  const double range = state.range();
  double rho = std::min(0.1 / range, 0.25 * std::abs(state.pole.k));
  for (int attempt = 0; attempt < 5; ++attempt, rho *= 0.5) {
    SearchRegion box;
    box.re_min = state.pole.k.real() - 1.5 * rho;
    box.re_max = state.pole.k.real() + 1.5 * rho;
    box.im_min = state.pole.k.imag() - 1.5 * rho;
    box.im_max = state.pole.k.imag() + 1.5 * rho;
    if (count_zeros(state.model(), box) == 1) return rho;
  }
  throw Error(ErrorKind::ContourTouchesOtherPole, "no isolating circle around the pole");
}

Complex residue_ratio(const PotentialModel& model, const GamowState& state, double r, double r_prime) {
  const double range = state.range();
  if (r < 0.0 || r_prime < 0.0 || r > range || r_prime > range) {
    throw Error(ErrorKind::OutsideInteractionRegion, "residue ratio needs 0 <= r, r' <= R");
  }
  const double rho = residue_circle_radius(state);
  const Complex kp = state.pole.k;
  constexpr int nodes = 64;
  Complex residue = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex offset = rho * std::exp(I * (2.0 * pi * (j + 0.5) / nodes));
    residue += green_outgoing(model, r, r_prime, kp + offset) * offset;
  }
  residue /= static_cast<double>(nodes);
  return residue / (state.at(r) * state.at(r_prime) / (2.0 * kp));
}

std::vector<StatePair> pair_states(const std::vector<GamowState>& states) {
  std::vector<StatePair> units;
  std::vector<bool> used(states.size(), false);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const PoleRecord& p = states[i].pole;
    if (p.cls == PoleClass::Bound || p.cls == PoleClass::Virtual) {
      units.push_back({i, std::nullopt});
      used[i] = true;
    }
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (used[i] || states[i].pole.cls != PoleClass::Resonance) continue;
    const Complex target = -std::conj(states[i].pole.k);
    const double tol = 1e-8 * std::max(1.0, std::abs(target));
    std::optional<std::size_t> partner;
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (!used[j] && j != i && states[j].pole.cls == PoleClass::AntiResonance &&
          std::abs(states[j].pole.k - target) < tol) {
        partner = j;
        break;
      }
    }
    if (!partner) {
      throw Error(ErrorKind::UnpairedPoles, "resonance at k = " + format_number(states[i].pole.k.real()) +
                                                " has no anti-resonance partner");
    }
    used[i] = used[*partner] = true;
    units.push_back({i, partner});
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!used[i]) throw Error(ErrorKind::UnpairedPoles, "anti-resonance without its resonance");
  }
  std::stable_sort(units.begin(), units.end(), [&](const StatePair& a, const StatePair& b) {
    return std::abs(states[a.first].pole.k) < std::abs(states[b.first].pole.k);
  });
  return units;
}

Complex sum_rule_inverse_k(const std::vector<GamowState>& states, double r, double r_prime, int n) {
  const auto units = leading_units(states, n);
  Complex sum = 0.0;
  for (const auto& unit : units) {
    require_interior(states[unit.first], r, "sum_rule_inverse_k");
    require_interior(states[unit.first], r_prime, "sum_rule_inverse_k");
    sum += unit_term(states, unit, [&](const GamowState& s) {
      return s.at(r) * s.at(r_prime) / s.pole.k;
    });
  }
  return sum;
}

Complex overlap_with_bump(const GamowState& state, const Bump& f) {
  if (f.lo() < 0.0 || f.hi() > state.range()) {
    throw Error(ErrorKind::UnsupportedTestFunction, "test function support must lie inside [0, R)");
  }
  const double width = f.hi() - f.lo();
  const int panels = std::max(8, static_cast<int>(std::ceil(std::abs(state.pole.k) * width / 2.0)));
  const CompositeRule rule = composite_gauss_legendre(f.lo(), f.hi(), panels, 16);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    sum += rule.weights[j] * state.at(rule.nodes[j]) * f(rule.nodes[j]);
  }
  return sum;
}

Complex sum_rule_closure(const std::vector<GamowState>& states, const Bump& testfn, double r, int n) {
  const auto units = leading_units(states, n);
  Complex sum = 0.0;
  for (const auto& unit : units) {
    require_interior(states[unit.first], r, "sum_rule_closure");
    sum += unit_term(states, unit, [&](const GamowState& s) {
      return s.at(r) * overlap_with_bump(s, testfn);
    });
  }
  return 0.5 * sum;
}

std::string gamow_state_to_csv(const GamowState& state) {
  CsvTable table({"r", "re_u", "im_u"});
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    table.add_row({format_number(state.grid.nodes[j]), format_number(state.u[j].real()),
                   format_number(state.u[j].imag())});
  }
  return table.str();
}

}  // namespace gamowkit
