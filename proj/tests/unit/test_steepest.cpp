#include <random>

#include "gamowkit/cerf.hpp"
#include "gamowkit/oracle.hpp"
#include "gamowkit/quadrature.hpp"
#include "gamowkit/steepest.hpp"
#include "support.hpp"

using namespace gamowkit;
using gktest::rel_error;

TEST_SUITE("steepest") {
  TEST_CASE("packet validation") {
    CHECK_NOTHROW(WavePacketSpec::cutoff(1.5, 0.0));
    CHECK_ERROR_KIND(WavePacketSpec::cutoff(1.5, 0.5), ErrorKind::InvalidArgument);
    CHECK_ERROR_KIND(WavePacketSpec::cutoff(-1.0, 0.0), ErrorKind::NonPositiveK);
    CHECK_ERROR_KIND(WavePacketSpec::gaussian(1.5, -5.0, 1.0), ErrorKind::InvalidArgument);
    CHECK_NOTHROW(WavePacketSpec::gaussian(1.5, -8.0, 1.0));
    CHECK_ERROR_KIND(WavePacketSpec::cutoff(1.5, 0.0, PhysicalUnits{0.0, 1.0}), ErrorKind::NonFiniteParameter);
    CHECK(parse_packet_kind(to_string(PacketKind::Gaussian)) == PacketKind::Gaussian);
  }

  TEST_CASE("momentum amplitudes") {
    const auto gauss = WavePacketSpec::gaussian(1.5, -8.0, 1.0);
    const double peak = std::abs(momentum_amplitude(gauss, 1.5));
    for (double p : {1.3, 1.45, 1.55, 2.0}) CHECK(std::abs(momentum_amplitude(gauss, p)) < peak);
    const auto norm = integrate_gk15([&](double p) { return Complex(std::norm(momentum_amplitude(gauss, p))); },
                                     -10.0, 13.0, {1e-14, 1e-14, 4000});
    CHECK(std::abs(norm.value - 1.0) < 1e-10);

    // Cutoff transform: h^{-1/2} exp(i (k0 - p) x0) / (i (k0 - p)) with hbar = 1.
    const auto cut = WavePacketSpec::cutoff(1.5, -2.0);
    const Complex p(0.7, 0.4);
    const Complex direct = std::exp(I * (1.5 - p) * -2.0) / (I * (1.5 - p)) / std::sqrt(2.0 * pi);
    CHECK(std::abs(momentum_amplitude(cut, p) - direct) < 1e-14);
    Complex circle = 0.0;
    for (int j = 0; j < 64; ++j) {
      const Complex d = 1e-3 * std::exp(I * (2.0 * pi * j / 64));
      circle += momentum_amplitude(cut, 1.5 + d) * d / 64.0;
    }
    CHECK(std::abs(circle - momentum_amplitude_residue(cut)) < 1e-12);
    CHECK(std::abs(momentum_amplitude_residue(cut) - I / std::sqrt(2.0 * pi)) < 1e-15);
  }

  TEST_CASE("saddle mapping") {
    const auto spec = WavePacketSpec::gaussian(1.5, -8.0, 1.0);
    const double x = 5.0, t = 4.0;
    const auto s = SaddleData::make(spec, x, t);
    CHECK(s.a == doctest::Approx(t / (2.0 * 0.5)));
    CHECK(s.b == doctest::Approx(-(x + 8.0)));
    CHECK(s.saddle == doctest::Approx(0.5 * (x + 8.0) / t));
    CHECK(std::abs(s.f - Complex(1.0, -1.0) * std::sqrt(0.5 / t)) < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> along(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
      const Complex p = s.p_of(along(rng));
      CHECK(std::abs(s.u_of(p).imag()) < 1e-12);
      CHECK(std::abs(p.imag() + (p.real() - s.saddle)) < 1e-12);
      const Complex lhs = std::exp(-I * (s.a * p * p + s.b * p));
      const Complex rhs = s.prefactor() * std::exp(-s.u_of(p) * s.u_of(p));
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    // Long times: the saddle drifts toward zero like m x / t.
    CHECK(SaddleData::make(spec, x, 400.0).saddle == doctest::Approx(0.5 * 13.0 / 400.0));
  }

  TEST_CASE("pole and remainder split") {
    const auto free = PotentialModel::delta_barrier(0.0);
    const auto barrier = PotentialModel::delta_barrier(2.0);
    const auto gauss = WavePacketSpec::gaussian(1.5, -8.0, 1.0);
    const auto cut = WavePacketSpec::cutoff(1.5, 0.0);
    const auto s = SaddleData::make(cut, 5.0, 2.0);

    const auto none = pole_remainder_split(free, gauss, SaddleData::make(gauss, 5.0, 2.0));
    CHECK(none.poles.empty());
    CHECK(none.H(0.3) == none.G(0.3));
    CHECK(pole_contribution(none, s) == Complex(0.0));

    const auto two = pole_remainder_split(barrier, cut, s);
    REQUIRE(two.poles.size() == 2);
    CHECK(std::abs(two.poles[0].u) <= std::abs(two.poles[1].u));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) {
      const Complex u(coord(rng), coord(rng));
      Complex rebuilt = two.H(u);
      for (const auto& p : two.poles) rebuilt += (p.A / two.f) / (u - p.u);
      CHECK(std::abs(rebuilt - two.G(u)) < 1e-12 * std::max(1.0, std::abs(two.G(u))));
    }
    // H stays bounded as circles shrink onto each pole.
    for (const auto& p : two.poles) {
      for (double rho : {1e-2, 1e-4}) {
        double worst = 0.0;
        for (int j = 0; j < 16; ++j) {
          const Complex u = p.u + rho * std::exp(I * (2.0 * pi * j / 16));
          worst = std::max(worst, std::abs(two.H(u)));
        }
        CHECK(worst < 10.0);
      }
    }
    CHECK_ERROR_KIND(pole_remainder_split(barrier, cut, s, 1), ErrorKind::PoleBudgetExceeded);
    CHECK_ERROR_KIND(pole_remainder_split(PotentialModel::square_barrier(4.0, 1.0), cut, s),
                     ErrorKind::NonMeromorphicIntegrand);
    CHECK_ERROR_KIND(pole_remainder_split(gktest::delta_shell(), cut, s), ErrorKind::WrongModelKind);
  }

  TEST_CASE("pole contribution") {
    const auto s = SaddleData::make(WavePacketSpec::cutoff(1.5, 0.0), 5.0, 2.0);
    // Single pole against quadrature of its own pole part along a contour
    // passing above it (the image of the original momentum contour).
    for (Complex uj : {Complex(0.4, -0.3), Complex(-0.2, 0.6)}) {
      PoleSplit split;
      split.f = s.f;
      split.poles.push_back({s.p_of(uj), uj, 1.0});
      split.G = [&](Complex u) { return (1.0 / s.f) / (u - uj); };
      const std::vector<Complex> path{-9.0, Complex(-2.0, 1.5), Complex(2.0, 1.5), 9.0};
      Complex sum = 0.0;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        sum += integrate_segment([&](Complex u) { return std::exp(-u * u) / (u - uj); }, path[i], path[i + 1],
                                 {1e-14, 1e-14, 4000})
                   .value;
      }
      CHECK(std::abs(pole_contribution(split, s) - s.prefactor() * sum) < 1e-9);
    }
    // Far pole below the axis: w(-u) ~ i / (sqrt(pi) (-u)).
    PoleSplit far;
    far.f = s.f;
    const Complex uf(-12.0, -3.0);
    far.poles.push_back({s.p_of(uf), uf, 1.0});
    const Complex asym = -I * pi * (I / (std::sqrt(pi) * -uf)) * s.prefactor();
    CHECK(rel_error(pole_contribution(far, s), asym) < 0.1);

    PoleSplit on_path;
    on_path.f = s.f;
    on_path.poles.push_back({s.p_of(0.5), Complex(0.5, 0.0), 1.0});
    CHECK_ERROR_KIND(pole_contribution(on_path, s), ErrorKind::PoleOnPath);
  }

  TEST_CASE("series weights and simple remainders") {
    for (int n = 0; n <= 6; ++n) {
      const auto moment = integrate_gk15(
          [n](double u) { return Complex(std::exp(-u * u) * std::pow(u, 2 * n)); }, -12.0, 12.0,
          {1e-15, 1e-15, 4000});
      double factorial = 1.0;
      for (int j = 2; j <= 2 * n; ++j) factorial *= j;
      CHECK(std::abs(series_weight(n) - moment.value.real() / (factorial * std::sqrt(pi))) < 1e-12);
    }
    const auto s = SaddleData::make(WavePacketSpec::cutoff(1.5, 0.0), 5.0, 2.0);
    PoleSplit constant;
    constant.f = s.f;
    constant.G = [](Complex) { return Complex(0.7, -0.2); };
    int used = -1;
    const Complex expected = s.prefactor() * s.f * std::sqrt(pi) * Complex(0.7, -0.2);
    CHECK(std::abs(remainder_contribution(constant, s, 6, &used) - expected) < 1e-14);
    CHECK(used == 1);
    PoleSplit square;
    square.f = s.f;
    square.G = [](Complex u) { return u * u; };
    CHECK(std::abs(remainder_contribution(square, s, 6) - s.prefactor() * s.f * std::sqrt(pi) / 2.0) < 1e-14);
  }

  TEST_CASE("free shutter") {
    const auto free = PotentialModel::delta_barrier(0.0);
    const auto cut = WavePacketSpec::cutoff(1.5, 0.0);
    for (double t : {0.5, 2.0}) {
      const auto w = transmitted_wave(free, cut, 2.0, t);
      CHECK(w.n_poles == 1);
      CHECK(std::abs(w.i_doubleprime) < 1e-12);
      CHECK(std::abs(w.psi - transmitted_wave_quadrature(free, cut, 2.0, t)) < 1e-8);
      // Moshinsky shutter: (1/2) exp(i theta) w(-u_j) with u_j the image of p = k0.
      const auto s = SaddleData::make(cut, 2.0, t);
      CHECK(std::abs(w.psi - 0.5 * s.prefactor() * faddeeva(-s.u_of(1.5))) < 1e-12);
    }
  }

  TEST_CASE("delta barrier with a cutoff wave") {
    const auto barrier = PotentialModel::delta_barrier(2.0);
    const auto cut = WavePacketSpec::cutoff(1.5, 0.0);
    const double stationary = std::norm(transmission_1d(barrier, 1.5).transmission);
    CHECK(std::norm(transmitted_wave(barrier, cut, 5.0, 0.2).psi) < 0.1 * stationary);
    CHECK(std::norm(transmitted_wave(barrier, cut, 5.0, 400.0).psi) == doctest::Approx(stationary).epsilon(0.05));
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const auto w = transmitted_wave(barrier, cut, 5.0, t);
      CHECK(std::abs(w.psi - transmitted_wave_quadrature(barrier, cut, 5.0, t)) < 1e-6);
    }
    // At x / t = hbar k0 / m the packet pole sits on the steepest path.
    const auto on_path = transmitted_wave(barrier, cut, 3.0, 1.0);
    CHECK(std::abs(on_path.psi - transmitted_wave_quadrature(barrier, cut, 3.0, 1.0)) < 1e-6);
    CHECK_ERROR_KIND(transmitted_wave(barrier, cut, -1.0, 1.0), ErrorKind::InvalidArgument);
  }

  TEST_CASE("Gaussian packet: series convergence and divergence") {
    const auto barrier = PotentialModel::delta_barrier(2.0);
    const auto gauss = WavePacketSpec::gaussian(1.5, -8.0, 1.0);
    const Complex exact = transmitted_wave_quadrature(barrier, gauss, 5.0, 8.0);
    double previous = 1.0;
    for (int n : {0, 2, 4}) {
      const double err = std::abs(transmitted_wave(barrier, gauss, 5.0, 8.0, n).psi - exact) / std::abs(exact);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(std::abs(transmitted_wave(barrier, gauss, 5.0, 8.0, 12).psi - exact) < 1e-6 * std::abs(exact));
    // 2 sigma^2 m / (hbar t) >= 1 puts the Taylor radius of H inside the Cauchy circle.
    CHECK_ERROR_KIND(transmitted_wave(barrier, gauss, 5.0, 0.5, 12), ErrorKind::SeriesDiverging);
  }

  TEST_CASE("Gaussian packet against Crank-Nicolson") {
    const auto barrier = PotentialModel::delta_barrier(2.0);
    const auto gauss = WavePacketSpec::gaussian(1.5, -8.0, 1.0);
    const auto initial = make_grid_state(-40.0, 60.0, 0.01, [&](double x) { return initial_wave(gauss, x); });
    const auto grid = crank_nicolson_propagate(barrier, initial, 1e-3, 4000, gauss.units, 0.0);
    for (double x : {3.0, 5.0, 8.0}) {
      const Complex cn = grid.values[static_cast<std::size_t>(std::llround((x + 40.0) / 0.01)) - 1];
      CHECK(rel_error(cn, transmitted_wave(barrier, gauss, x, 4.0).psi) < 1e-3);
    }
  }

  TEST_CASE("csv export") {
    const auto w = transmitted_wave(PotentialModel::delta_barrier(2.0), WavePacketSpec::cutoff(1.5, 0.0), 5.0, 1.0);
    const std::string csv = transmitted_to_csv({w});
    CHECK(csv.rfind("x,t,re_psi,im_psi,abs2,i_prime_abs,i_doubleprime_abs,n_poles,n_series_terms\n", 0) == 0);
  }
}
