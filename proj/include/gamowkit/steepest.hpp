#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gamowkit/model.hpp"

namespace gamowkit {

enum class PacketKind { CutoffPlaneWave, Gaussian };

/// Initial 1D packet left of the potential.
///   CutoffPlaneWave  psi0(x) = exp(i k0 x) for x < x0, 0 beyond (x0 <= 0)
///   Gaussian         psi0(x) = (2 pi sigma^2)^{-1/4} exp(i k0 (x - x0) - (x - x0)^2 / 4 sigma^2)
///                    with x0 + 6 sigma < 0
struct WavePacketSpec {
  PacketKind kind = PacketKind::CutoffPlaneWave;
  double k0 = 1.5;
  double x0 = 0.0;
  double sigma = 1.0;
  PhysicalUnits units{};

  static WavePacketSpec cutoff(double k0, double x0, PhysicalUnits units = {});
  static WavePacketSpec gaussian(double k0, double x0, double sigma, PhysicalUnits units = {});
  void validate() const;
};

std::string_view to_string(PacketKind kind) noexcept;
PacketKind parse_packet_kind(std::string_view name);

/// phi(p) = h^{-1/2} int dx psi0(x) exp(-ipx/hbar), continued to complex p.
Complex momentum_amplitude(const WavePacketSpec& spec, Complex p);
/// Residue of phi at its pole p = hbar k0 (cutoff wave only).
Complex momentum_amplitude_residue(const WavePacketSpec& spec);
Complex initial_wave(const WavePacketSpec& spec, double x);

/// Exponent -i (a p^2 + b p) of the transmitted-wave integral, with
/// a = t / (2 m hbar) and b = -(x - x0) / hbar (the packet's exp(-i p x0 / hbar)
/// is moved into the exponent). u = (p - p_s) / f is real on the steepest path.
struct SaddleData {
  double a = 0.0;
  double b = 0.0;
  double saddle = 0.0;  // p_s = -b / 2a
  Complex f;            // (1 - i) (m hbar / t)^{1/2}
  double theta = 0.0;   // b^2 / 4a = m (x - x0)^2 / (2 hbar t)

  static SaddleData make(const WavePacketSpec& spec, double x, double t);
  Complex u_of(Complex p) const { return (p - saddle) / f; }
  Complex p_of(Complex u) const { return f * u + saddle; }
  Complex prefactor() const { return std::exp(Complex(0.0, theta)); }
};

struct SplitPole {
  Complex p;
  Complex u;
  Complex A;  // residue of g in p; A / f is the residue of G in u
};

/// G(u) = g(p(u)) = sum_j (A_j / f) / (u - u_j) + H(u), poles sorted by |u_j|.
struct PoleSplit {
  std::vector<SplitPole> poles;
  std::function<Complex(Complex)> G;
  Complex f;

  Complex H(Complex u) const;
};

/// g(p) = h^{-1/2} T(p) phi(p) exp(i p x0 / hbar).
Complex transmitted_integrand(const PotentialModel& model, const WavePacketSpec& spec, Complex p);

PoleSplit pole_remainder_split(const PotentialModel& model, const WavePacketSpec& spec,
                               const SaddleData& saddle, int pole_budget = 8);

/// I' = -i pi e^{i theta} sum_j A_j w(-u_j).
Complex pole_contribution(const PoleSplit& split, const SaddleData& saddle);

/// (2n - 1)!! / (2^n (2n)!).
double series_weight(int n);

/// I'' = e^{i theta} f sqrt(pi) sum_{n <= n_max} series_weight(n) H^{(2n)}(0),
/// derivatives from a 64-node Cauchy circle of radius 1. Summation stops early
/// once the Taylor coefficients of H fall to the round-off level of G; the
/// number of terms kept goes to `terms_used`.
Complex remainder_contribution(const PoleSplit& split, const SaddleData& saddle, int n_max,
                               int* terms_used = nullptr);

struct TransmittedWave {
  double x = 0.0;
  double t = 0.0;
  Complex psi;
  Complex i_prime;
  Complex i_doubleprime;
  int n_poles = 0;
  int n_series_terms = 0;
};

TransmittedWave transmitted_wave(const PotentialModel& model, const WavePacketSpec& spec, double x,
                                 double t, int n_max = 12);

/// The same integral by adaptive quadrature in the u plane along a path that
/// keeps every pole on its right (the image of a p contour above all
/// singularities): the real axis, lifted over poles with Im u_j > -lift.
Complex transmitted_wave_quadrature(const PotentialModel& model, const WavePacketSpec& spec, double x,
                                    double t, double lift = 0.5);

std::string transmitted_to_csv(const std::vector<TransmittedWave>& rows);

}  // namespace gamowkit
