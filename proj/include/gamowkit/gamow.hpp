#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamowkit/model.hpp"
#include "gamowkit/poles.hpp"
#include "gamowkit/testfn.hpp"

namespace gamowkit {

struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Gauss-Legendre grid on [0, R] whose panels end on R, the only
/// discontinuity of the radial models.
RadialGrid make_radial_grid(const PotentialModel& model, int panels = 8, int order = 32);

/// Purely outgoing solution at a pole. u(r) = scale * phi(k_p, r) for r <= R and
/// u(r) = tail_coefficient * exp(i k_p r) beyond; `u` holds the grid samples.
class GamowState {
 public:
  PoleRecord pole;
  RadialGrid grid;
  std::vector<Complex> u;
  Complex tail_coefficient;
  bool normalized = false;
  Complex scale{1.0, 0.0};      // factor multiplying the regular solution
  double matching_defect = 0.0; // |u'(R+) - i k u(R)| / |k u(R)|

  Complex at(double r) const;
  double range() const { return model_range_; }
  const PotentialModel& model() const { return model_; }

  /// int_0^R u^2 dr + i u(R)^2 / (2 k_p), from a closed form where one exists.
  Complex norm_integral() const;
  /// Same quantity from the grid quadrature alone.
  Complex norm_integral_quadrature() const;

  /// Copy with u multiplied by `factor`.
  GamowState scaled(Complex factor, bool normalized) const;

 private:
  friend GamowState solve_gamow(const PotentialModel&, const PoleRecord&, const RadialGrid&);

  explicit GamowState(const PotentialModel& model) : model_(model), model_range_(model.range()) {}

  PotentialModel model_;
  double model_range_;
};

GamowState solve_gamow(const PotentialModel& model, const PoleRecord& pole, const RadialGrid& grid);

/// Rescales u so that the norm integral equals 1, choosing the constant with
/// Re > 0 (Im >= 0 on a tie). Already normalized states are returned unchanged.
GamowState normalize_gamow(const GamowState& state);

/// The time-reversed partner at -k_p*, with u_{-p} = u_p*.
GamowState mirror_state(const GamowState& state);

/// Normalized states for the given poles plus the mirror partner of every
/// resonance, in the order: pole_0, mirror_0, pole_1, mirror_1, ...
std::vector<GamowState> paired_states(const PotentialModel& model,
                                      const std::vector<PoleRecord>& poles,
                                      const RadialGrid& grid);

/// Residue of G+ at k_p from a circle quadrature, divided by u(r) u(r') / (2 k_p).
double residue_circle_radius(const GamowState& state);
Complex residue_ratio(const PotentialModel& model, const GamowState& state, double r, double r_prime);

/// One summation unit: a resonance with its mirror, or a single pole on the
/// imaginary axis. Units are ordered by |k|.
struct StatePair {
  std::size_t first;
  std::optional<std::size_t> partner;
};

std::vector<StatePair> pair_states(const std::vector<GamowState>& states);

/// sum over the first N units of u_n(r) u_n(r') / k_n.
Complex sum_rule_inverse_k(const std::vector<GamowState>& states, double r, double r_prime, int n);

/// (1/2) sum over the first N units of u_n(r) int u_n(r') f(r') dr'.
Complex sum_rule_closure(const std::vector<GamowState>& states, const Bump& testfn, double r, int n);

/// int u(r) f(r) dr over the support of f, with enough panels to resolve u.
Complex overlap_with_bump(const GamowState& state, const Bump& f);

std::string gamow_state_to_csv(const GamowState& state);

}  // namespace gamowkit
