#pragma once

#include <string_view>

#include "gamowkit/types.hpp"

namespace gamowkit {

enum class ModelKind { RadialDeltaShell, RadialSquareWell, Barrier1DDelta, Barrier1DSquare };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

/// Raw parameters as they appear in a config file. Only the fields relevant
/// to `kind` are read: lambda/a for the delta shell, v0/r for the square
/// well, lambda for the delta barrier, v0/d for the square barrier.
struct ModelSpec {
  ModelKind kind = ModelKind::RadialDeltaShell;
  double lambda = 10.0;
  double a = 1.0;
  double v0 = 4.0;
  double d = 1.0;
  double r = 1.0;

  bool operator==(const ModelSpec&) const = default;
};

/// A finite-range potential with closed-form scattering data. Strengths are
/// given in wavenumber units: the radial equation reads
/// -u'' + V(r) u = k^2 u, the 1D equation -psi'' + V(x) psi = k^2 psi.
///
///   RadialDeltaShell  V = lambda * delta(r - a)
///   RadialSquareWell  V = -v0 for r < R
///   Barrier1DDelta    V = lambda * delta(x)      (support is the point 0)
///   Barrier1DSquare   V = +v0 for 0 < x < d
struct ModelSpec;
class PotentialModel;
PotentialModel build_model(const ModelSpec& spec);

class PotentialModel {
 public:
  static PotentialModel delta_shell(double lambda, double a);
  static PotentialModel square_well(double v0, double radius);
  static PotentialModel delta_barrier(double lambda);
  static PotentialModel square_barrier(double v0, double width);

  ModelKind kind() const noexcept { return kind_; }
  bool radial() const noexcept {
    return kind_ == ModelKind::RadialDeltaShell || kind_ == ModelKind::RadialSquareWell;
  }
  /// Coordinate beyond which the potential vanishes (0 for the delta barrier).
  double range() const noexcept { return range_; }
  /// lambda for the delta kinds, v0 for the square kinds.
  double strength() const noexcept { return strength_; }
  bool has_delta() const noexcept {
    return kind_ == ModelKind::RadialDeltaShell || kind_ == ModelKind::Barrier1DDelta;
  }
  /// Location of the delta term, when there is one.
  double delta_position() const noexcept {
    return kind_ == ModelKind::RadialDeltaShell ? range_ : 0.0;
  }
  /// Regular part of V (the delta term is excluded).
  double smooth_potential(double x) const noexcept;

  ModelSpec spec() const;

 private:
  friend PotentialModel build_model(const ModelSpec& spec);
  PotentialModel(ModelKind kind, double strength, double range)
      : kind_(kind), strength_(strength), range_(range) {}

  ModelKind kind_;
  double strength_;
  double range_;
};

PotentialModel build_model(const ModelSpec& spec);

/// Jost function F(k) = W(f, phi) for radial models (F -> 1 for a free
/// particle). Its zeros are the poles of the S matrix and of G+.
Complex jost_function(const PotentialModel& model, Complex k);
Complex jost_derivative(const PotentialModel& model, Complex k);

/// Dispersion function D(k). Radial: D = 2ik F(k), which for the delta shell
/// is 2ik + lambda (exp(2ika) - 1). 1D: D = 2ik / T(k).
Complex dispersion(const PotentialModel& model, Complex k);
Complex dispersion_derivative(const PotentialModel& model, Complex k);

/// Entire function whose zeros are exactly the physical poles: F(k) for
/// radial models (D carries a spurious zero at k = 0), D(k) for 1D models.
Complex pole_function(const PotentialModel& model, Complex k);
Complex pole_function_derivative(const PotentialModel& model, Complex k);

struct ScatteringData {
  Complex dispersion;
  Complex smatrix;
  Complex dispersion_derivative;
};

ScatteringData scattering_data(const PotentialModel& model, Complex k);

/// S(k) = F(-k) / F(k); throws PoleEvaluation at a zero of D.
Complex smatrix(const PotentialModel& model, Complex k);

/// Regular solution phi(k, r) with phi(0) = 0, phi'(0) = 1, and its r-derivative.
Complex regular_solution(const PotentialModel& model, Complex k, double r);
Complex regular_solution_derivative(const PotentialModel& model, Complex k, double r);

/// Outgoing solution f(k, r) = exp(ikr) for r >= range.
Complex outgoing_solution(const PotentialModel& model, Complex k, double r);

/// Outgoing Green function of (k^2 - H), G+ = -phi(r<) f(r>) / F(k). Its
/// residue at a pole k_p is u_p(r) u_p(r') / (2 k_p) for Gamow states
/// normalized to unity.
Complex green_outgoing(const PotentialModel& model, double r, double r_prime, Complex k);

struct Amplitudes1D {
  Complex transmission;
  Complex reflection;
};

/// Transmission and reflection amplitudes of a 1D model at momentum p
/// (wavenumber p / hbar), analytically continued off the real axis.
Amplitudes1D transmission_1d(const PotentialModel& model, Complex p, const PhysicalUnits& units = {});

/// Position representation of the scattering state |k+>.
///   radial: sqrt(2/pi) k phi(k, r) / F(k), so int dk psi_k(r) psi_k(r')* = delta(r - r')
///           once bound states are added;
///   1D:     h^{-1/2} (exp(ipx/hbar) + R exp(-ipx/hbar)) left of the barrier,
///           h^{-1/2} T exp(ipx/hbar) right of it, with p = hbar k.
Complex scattering_wave(const PotentialModel& model, double k, double r, const PhysicalUnits& units = {});

}  // namespace gamowkit
