#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gamowkit/gamow.hpp"
#include "gamowkit/testfn.hpp"

namespace gamowkit {

enum class ContourLabel { GammaB, GammaM, C0, CL, RealAxis, Custom };

std::string_view to_string(ContourLabel label) noexcept;

/// Piecewise-linear path in the k plane, traversed in vertex order.
struct Contour {
  std::vector<Complex> vertices;
  bool closed = false;
  ContourLabel label = ContourLabel::Custom;

  /// [0, k_max] on the real axis.
  static Contour real_axis(double k_max);
  /// 0 -> depth (1 - i) -> re_turn - i depth -> re_turn + depth -> k_max: dips
  /// into the fourth quadrant and returns to the real axis.
  static Contour berggren(double depth, double re_turn, double k_max,
                          ContourLabel label = ContourLabel::GammaB);
  /// k = s exp(-i pi/4), s in [-radius, radius].
  static Contour c_l(double radius);
  /// Stand-in for C0: two rays from c (1 + i), one at 3 pi/4 and one at -pi/4,
  /// each of length `reach`. Cauchy-equivalent to C0 once the fourth-quadrant
  /// poles between the real axis and the lower ray are added back.
  static Contour c0(double c, double reach);
  /// Counter-clockwise polygon with `sides` vertices on a circle.
  static Contour circle(Complex center, double radius, int sides = 128);

  std::size_t segments() const { return closed ? vertices.size() : vertices.size() - 1; }
};

/// Whether k lies inside the region bounded by an open contour that starts
/// and ends on the real axis, closed along that axis.
bool contour_encloses(const Contour& contour, Complex k);

enum class IntegrandKind {
  ScatteringKernel,  // (2/pi) k^2 phi(k,r) phi(k,r') / (F(k) F(-k)), the |k+><+k| kernel
  PropagatorKernel,  // G+(r,r';k) exp(-i k^2 t) 2k
};

struct ContourIntegral {
  Complex value;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod along every segment of the contour. Raises
/// PoleTooClose when a pole lies within 1e-3 of the path and NoConvergence
/// when the error target (1e-9) is missed.
ContourIntegral contour_integral(const PotentialModel& model, IntegrandKind kind,
                                 const Contour& contour, double r, double r_prime, double t);

/// g(r, r'; t) from the C0 stand-in, with the swept poles added back.
Complex propagator_along_c0(const PotentialModel& model, double r, double r_prime, double t);

enum class BerggrenWeight { Identity, Hamiltonian };

struct PoleTerm {
  PoleRecord pole;
  Complex value;
};

struct BerggrenResult {
  Complex reconstructed;
  Complex exact;
  Complex bound_part;
  Complex resonance_part;
  Complex background;
  double background_error = 0.0;
  std::vector<PoleRecord> enclosed;      // resonances between the real axis and the contour
  std::vector<Complex> left_overlaps;    // int u_n f, per enclosed resonance
  std::vector<Complex> right_overlaps;   // int u_n g
  int n_resonances = 0;
};

/// Rebuilds (f, g) or (f, H g) from bound states, the resonances enclosed by
/// the contour and the contour integral; the contour's real-axis tail is
/// continued to infinity. f and g must vanish outside [0, support_cut]
/// (support_cut <= 0 means the model range).
BerggrenResult berggren_identity(const PotentialModel& model, const Bump& f, const Bump& g,
                                 const Contour& contour,
                                 BerggrenWeight weight = BerggrenWeight::Identity,
                                 double support_cut = 0.0);

/// max |(2/pi) k^2 A_f(k) A_g(k) / (F(k) F(-k))| over the fourth-quadrant arc
/// |k| = arc_radius, with A_f(k) = int f phi(k, .).
double background_divergence_probe(const PotentialModel& model, const Bump& f, const Bump& g,
                                   double arc_radius, int samples = 181);

enum class TailMode {
  Subtracted,  // M - 1/(2 sqrt(pi) y): same limit, much faster convergence
  Plain,
};

struct PropagatorBreakdown {
  Complex total;
  std::vector<PoleTerm> bound_terms;
  std::vector<PoleTerm> pole_terms;
  Complex background;
  Complex exponential_part;
  Complex nonexponential_part;
  double t = 0.0;
  double r = 0.0;
  double r_prime = 0.0;
  int n_terms = 0;
  double truncation_estimate = 0.0;
  bool bound_states_included = false;
};

/// sum over the first n units of u_n(r) u_n(r') M(k_n, t); background is 0.
PropagatorBreakdown propagator_full(const std::vector<GamowState>& states, double r,
                                    double r_prime, double t, int n_pairs = 20,
                                    TailMode mode = TailMode::Subtracted);

/// Same units, regrouped as u u exp(-i k^2 t) - [u u M(-k) - u* u* M(-k*)].
PropagatorBreakdown propagator_proper_form(const std::vector<GamowState>& states, double r,
                                           double r_prime, double t, int n_pairs = 20,
                                           TailMode mode = TailMode::Subtracted);

struct BackgroundOptions {
  double radius = 0.0;  // 0: max(10, 6 / sqrt(t))
  double abs_tol = 1e-12;
  int max_extensions = 2;
};

/// (i / 2 pi) int_{C_L} G+ exp(-i k^2 t) 2k dk.
ContourIntegral cl_background(const PotentialModel& model, double r, double r_prime, double t,
                              const BackgroundOptions& options = {});

/// Bound states and proper resonances from `states` with exp(-i k^2 t), plus
/// the C_L background. Valid for any r, r' >= 0.
PropagatorBreakdown propagator_proper_plus_background(const PotentialModel& model,
                                                      const std::vector<GamowState>& states,
                                                      double r, double r_prime, double t,
                                                      const BackgroundOptions& options = {});

/// <psi| exp(-iHt) |psi> for a real bump psi, from the full-pole expansion.
Complex survival_amplitude(const std::vector<GamowState>& states, const Bump& psi, double t,
                           int n_pairs = 20, TailMode mode = TailMode::Subtracted);

struct EffectiveHamiltonian {
  std::vector<PoleRecord> poles;
  std::vector<Complex> matrix;  // row-major, dimension x dimension

  std::size_t dimension() const { return poles.size(); }
  Complex operator()(std::size_t i, std::size_t j) const { return matrix[i * dimension() + j]; }
  std::vector<Complex> eigenvalues() const;
  /// sum_ij left_i H_ij right_j.
  Complex matrix_element(const std::vector<Complex>& left, const std::vector<Complex>& right) const;
};

EffectiveHamiltonian effective_hamiltonian(const std::vector<PoleRecord>& poles);

std::string breakdowns_to_csv(const std::vector<PropagatorBreakdown>& rows);

}  // namespace gamowkit
