#include "gamowkit/model.hpp"
#include "support.hpp"

using namespace gamowkit;
using gktest::rel_error;

TEST_SUITE("model") {
  TEST_CASE("construction and validation") {
    const auto shell = PotentialModel::delta_shell(10.0, 1.0);
    CHECK(shell.range() == 1.0);
    CHECK(shell.strength() == 10.0);
    CHECK(shell.radial());
    CHECK_NOTHROW(PotentialModel::delta_shell(0.0, 1.0));
    CHECK_ERROR_KIND(PotentialModel::square_barrier(4.0, -1.0), ErrorKind::NonPositiveRange);
    CHECK_ERROR_KIND(PotentialModel::delta_shell(std::nan(""), 1.0), ErrorKind::NonFiniteParameter);
    CHECK(parse_model_kind(to_string(ModelKind::Barrier1DSquare)) == ModelKind::Barrier1DSquare);

    ModelSpec spec;
    spec.kind = ModelKind::RadialSquareWell;
    spec.v0 = 4.0;
    spec.r = 2.0;
    const auto well = build_model(spec);
    CHECK(well.range() == 2.0);
    CHECK(well.smooth_potential(1.0) == -4.0);
    CHECK(well.smooth_potential(2.5) == 0.0);
  }

  TEST_CASE("dispersion function closed forms") {
    const auto free = PotentialModel::delta_shell(0.0, 1.0);
    for (Complex k : {Complex(1.3, 0.0), Complex(0.4, -2.0), Complex(-3.0, 0.7)}) {
      CHECK(std::abs(dispersion(free, k) - 2.0 * I * k) < 1e-15);
    }
    const auto shell = gktest::delta_shell();
    const Complex k(2.1, -0.3);
    const Complex expected = 2.0 * I * k + 10.0 * (std::exp(2.0 * I * k) - 1.0);
    CHECK(std::abs(dispersion(shell, k) - expected) < 1e-13);
    const double step = 1e-6;
    const Complex fd = (dispersion(shell, k + step) - dispersion(shell, k - step)) / (2.0 * step);
    CHECK(std::abs(dispersion_derivative(shell, k) - fd) < 1e-7);

    // Strong coupling pushes the zeros toward n pi / a.
    const auto stiff = PotentialModel::delta_shell(1e6, 1.0);
    const auto poles = first_resonances(stiff, 2, 1);
    CHECK(std::abs(poles[0].k - pi) < 1e-5);
    CHECK(std::abs(poles[1].k - 2.0 * pi) < 1e-5);
  }

  TEST_CASE("S matrix") {
    const auto free = PotentialModel::delta_shell(0.0, 1.0);
    CHECK(std::abs(smatrix(free, 0.8) - 1.0) < 1e-15);
    const auto shell = gktest::delta_shell();
    CHECK(std::abs(std::abs(smatrix(shell, 1.3)) - 1.0) < 1e-12);
    const auto well = PotentialModel::square_well(4.0, 1.0);
    for (double k = 0.05; k < 20.0; k += 0.37) {
      CHECK(std::abs(std::abs(smatrix(shell, k)) - 1.0) < 1e-10);
      CHECK(std::abs(std::abs(smatrix(well, k)) - 1.0) < 1e-10);
    }
    const Complex z(1.7, 0.4);
    CHECK(std::abs(smatrix(shell, z) * smatrix(shell, -z) - 1.0) < 1e-12);
    const Complex pole = first_resonances(shell, 1, 1).front().k;
    CHECK_ERROR_KIND(smatrix(shell, pole), ErrorKind::PoleEvaluation);
  }

  TEST_CASE("outgoing Green function") {
    const auto free = PotentialModel::delta_shell(0.0, 1.0);
    const Complex k = 2.0;
    const Complex expected = -std::sin(k * 0.3) * std::exp(I * k * 0.7) / k;
    CHECK(std::abs(green_outgoing(free, 0.3, 0.7, k) - expected) < 1e-14);

    const auto shell = gktest::delta_shell();
    const Complex z(1.0, 0.5);
    CHECK(green_outgoing(shell, 0.2, 0.9, z) == green_outgoing(shell, 0.9, 0.2, z));

    // Beyond the range, G+ is the free form with the outgoing part scaled by S.
    const double r = 1.4, rp = 2.3, q = 1.9;
    const Complex outside = -std::exp(I * q * rp) *
                            (smatrix(shell, q) * std::exp(I * q * r) - std::exp(-I * q * r)) /
                            (2.0 * I * q);
    CHECK(std::abs(green_outgoing(shell, r, rp, q) - outside) < 1e-8);
    CHECK_ERROR_KIND(green_outgoing(shell, 0.4, 0.6, first_resonances(shell, 1, 1).front().k),
                     ErrorKind::PoleEvaluation);
  }

  TEST_CASE("residue of G+ at the first resonance") {
    const auto& model = gktest::delta_shell();
    const auto pole = first_resonances(model, 1, 1).front();
    const auto state = normalize_gamow(solve_gamow(model, pole, make_radial_grid(model)));
    const Complex expected = state.at(0.4) * state.at(0.6) / (2.0 * pole.k);
    const Complex k = pole.k + Complex(1e-7, 1e-7);
    CHECK(rel_error((k - pole.k) * green_outgoing(model, 0.4, 0.6, k), expected) < 1e-6);
  }

  TEST_CASE("1D transmission") {
    const auto clear = PotentialModel::delta_barrier(0.0);
    const auto amp = transmission_1d(clear, 1.0);
    CHECK(std::abs(amp.transmission - 1.0) < 1e-15);
    CHECK(std::abs(amp.reflection) < 1e-15);

    const auto square = PotentialModel::square_barrier(4.0, 1.0);
    for (double p : {0.5, 2.0, 3.0, 7.5}) {
      const auto a = transmission_1d(square, p);
      CHECK(std::abs(std::norm(a.transmission) + std::norm(a.reflection) - 1.0) < 1e-12);
    }
    // Delta barrier: T = 2ik / (2ik - lambda) has its only pole at k = -i lambda / 2.
    const auto barrier = PotentialModel::delta_barrier(2.0);
    CHECK(std::abs(dispersion(barrier, Complex(0.0, -1.0))) < 1e-15);
    const Complex p(1.2, -0.4);
    const Complex expected = 2.0 * I * p / (2.0 * I * p - 2.0);
    CHECK(std::abs(transmission_1d(barrier, p).transmission - expected) < 1e-14);
    CHECK_ERROR_KIND(transmission_1d(barrier, Complex(0.0, -1.0)), ErrorKind::PoleEvaluation);
    CHECK_ERROR_KIND(transmission_1d(gktest::delta_shell(), 1.0), ErrorKind::WrongModelKind);
  }

  TEST_CASE("scattering states") {
    const auto free = PotentialModel::delta_shell(0.0, 1.0);
    const double k = 1.7;
    CHECK(std::abs(scattering_wave(free, k, 0.8) - std::sqrt(2.0 / pi) * std::sin(k * 0.8)) < 1e-14);

    const auto barrier = PotentialModel::delta_barrier(2.0);
    const double x = 3.0;
    const Complex t = transmission_1d(barrier, k).transmission;
    const Complex expected = t * std::exp(I * k * x) / std::sqrt(2.0 * pi);
    CHECK(std::abs(scattering_wave(barrier, k, x) - expected) < 1e-14);
    CHECK_ERROR_KIND(scattering_wave(free, 0.0, 0.5), ErrorKind::NonPositiveK);
  }

  TEST_CASE("scattering closure against a narrow test function") {
    // int dk psi_k(r) int psi_k(r') f(r') dr' -> f(r) for the bound-state-free shell.
    const auto& model = gktest::delta_shell();
    const Bump f{0.5, 0.2, 1.0};
    auto transform = [&](double k) {
      Complex acc = 0.0;
      const int n = 400;
      for (int j = 0; j < n; ++j) {
        const double x = f.lo() + (j + 0.5) * (f.hi() - f.lo()) / n;
        acc += scattering_wave(model, k, x) * f(x);
      }
      return acc * (f.hi() - f.lo()) / static_cast<double>(n);
    };
    Complex sum = 0.0;
    const double dk = 0.01;
    for (double k = dk / 2; k < 120.0; k += dk) {
      sum += scattering_wave(model, k, 0.55) * std::conj(transform(k)) * dk;
    }
    CHECK(std::abs(sum - f(0.55)) < 2e-3);
  }

  TEST_CASE("zero set symmetry and first quadrant") {
    const auto& model = gktest::delta_shell();
    const auto well = PotentialModel::square_well(4.0, 1.0);
    for (const auto& m : {model, well}) {
      SearchRegion first{0.01, 20.0, 0.01, 5.0};
      CHECK(count_zeros(m, first) == 0);
      SearchRegion fourth{0.1, 20.0, -3.0, -0.001};
      SearchRegion third{-20.0, -0.1, -3.0, -0.001};
      CHECK(count_zeros(m, fourth) == count_zeros(m, third));
    }
  }
}
