#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gamowkit/expand.hpp"
#include "gamowkit/model.hpp"

namespace gamowkit {

/// Wavefunction on the interior nodes x_j = x_min + (j + 1) h of a box with
/// Dirichlet walls at x_min and x_min + (size + 1) h.
struct GridState {
  double x_min = 0.0;
  double h = 0.01;
  std::vector<Complex> values;
  double t = 0.0;

  double x(std::size_t j) const { return x_min + (static_cast<double>(j) + 1.0) * h; }
  double box_length() const { return (static_cast<double>(values.size()) + 1.0) * h; }
  double norm() const;
};

GridState make_grid_state(double x_min, double x_max, double h,
                          const std::function<Complex(double)>& psi0);

/// Crank-Nicolson steps of i dpsi/dt = (hbar / 2m)(-psi'' + V psi), with V in
/// the model's wavenumber units. Delta terms enter as strength / h on the
/// nodes next to the delta, split linearly by distance. Raises
/// BoundaryContamination when more than 1e-6 of the norm sits in the outer
/// `guard_fraction` of the box at the end (only the far wall for radial boxes).
GridState crank_nicolson_propagate(const PotentialModel& model, const GridState& initial, double dt,
                                   int steps, const PhysicalUnits& units = {},
                                   double guard_fraction = 0.1);

struct CnOptions {
  double h = 0.0;            // 0: 0.005 sqrt(t / 0.1) clamped to [0.005, 0.02]
  double dt = 0.0;           // 0: chosen per time and grid level
  double sigma = 0.0;        // source width at grid step h; 0 means 5 h
  double box = 0.0;          // 0: sized from the fastest Crank-Nicolson group velocity
  bool richardson_dt = true;
  bool richardson_h = true;
  bool richardson_width = true;
  int threads = 0;
};

struct CnElement {
  double r;
  double t;
  Complex value;
};

/// g(r, r'; t) from propagating a narrow normalized source at r' (one run per
/// time, runs spread over threads). The source 3 G_s - 3 G_{s sqrt2} + G_{s sqrt3}
/// cancels the O(s^2) and O(s^4) smearing. Runs at dt and dt/2, and at h and
/// h/2 (with s scaled along), are combined as (4 g_fine - g_coarse) / 3.
std::vector<CnElement> cn_propagator_elements(const PotentialModel& model, double r_prime,
                                              const std::vector<double>& rs,
                                              const std::vector<double>& ts,
                                              const CnOptions& options = {});

/// Open path 0 -> k0 -> k0 + reach exp(-i theta) for spectral_quadrature.
Contour spectral_path(double k0 = 3.0, double theta = pi / 3.0, double reach = 0.0);

/// g(r, r'; t) = sum_bound Res + sum_swept Res
///             + (i / 2 pi) int_path 2k exp(-i k^2 t) [G+(k) - G+(-k)] dk,
/// the real-axis form folded onto k >= 0 and bent along `path`. Residues are
/// taken numerically on small circles, so no Gamow normalization enters.
Complex spectral_quadrature(const PotentialModel& model, double r, double r_prime, double t,
                            const Contour& path);

/// s-wave free propagator (4 pi i t)^{-1/2} [exp(i (r - r')^2 / 4t) - exp(i (r + r')^2 / 4t)].
Complex free_radial_propagator(double r, double r_prime, double t);

std::string grid_state_to_csv(const GridState& state);

}  // namespace gamowkit
