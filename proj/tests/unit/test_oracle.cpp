#include <cmath>

#include "gamowkit/oracle.hpp"
#include "support.hpp"

using namespace gamowkit;
using gktest::rel_error;

namespace {

Complex gaussian_packet(double x, double x0, double sigma, double k0) {
  const double d = x - x0;
  return std::pow(2.0 * pi * sigma * sigma, -0.25) * std::exp(Complex(-d * d / (4.0 * sigma * sigma), k0 * x));
}

double mean_position(const GridState& s) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    num += s.x(j) * std::norm(s.values[j]);
    den += std::norm(s.values[j]);
  }
  return num / den;
}

Complex value_at(const GridState& s, double x) {
  return s.values[static_cast<std::size_t>(std::llround((x - s.x_min) / s.h)) - 1];
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("grid states") {
    const auto s = make_grid_state(0.0, 1.0, 0.1, [](double x) { return Complex(x); });
    CHECK(s.values.size() == 9);
    CHECK(std::abs(s.x(0) - 0.1) < 1e-15);
    CHECK(std::abs(s.box_length() - 1.0) < 1e-15);
    CHECK_ERROR_KIND(make_grid_state(0.0, 0.1, 0.1, [](double) { return Complex(1.0); }),
                     ErrorKind::InvalidArgument);
    const std::string csv = grid_state_to_csv(s);
    CHECK(csv.rfind("x,re_psi,im_psi\n", 0) == 0);
  }

  TEST_CASE("free packet moves at the group velocity and keeps its norm") {
    const auto free = PotentialModel::delta_barrier(0.0);
    const double k0 = 2.0, x0 = -10.0;
    const auto initial = make_grid_state(-25.0, 25.0, 0.02, [&](double x) {
      return gaussian_packet(x, x0, 1.0, k0);
    });
    const double n0 = initial.norm();
    CHECK(std::abs(n0 - 1.0) < 1e-10);
    const auto later = crank_nicolson_propagate(free, initial, 1e-3, 2000);
    CHECK(std::abs(later.t - 2.0) < 1e-12);
    const double v = 2.0 * k0;  // hbar k0 / m with m = 1/2
    CHECK(std::abs((mean_position(later) - x0) / (v * 2.0) - 1.0) < 1e-3);
    CHECK(std::abs(later.norm() - n0) < 2e-10);

    PhysicalUnits heavy{2.0, 1.0};
    const auto slow = crank_nicolson_propagate(free, initial, 1e-3, 2000, heavy);
    CHECK(std::abs((mean_position(slow) - x0) / (k0 / heavy.mass * 2.0) - 1.0) < 1e-3);
  }

  TEST_CASE("boundary contamination") {
    const auto free = PotentialModel::delta_barrier(0.0);
    const auto initial = make_grid_state(-10.0, 10.0, 0.02, [](double x) {
      return gaussian_packet(x, 0.0, 1.0, 3.0);
    });
    CHECK_ERROR_KIND(crank_nicolson_propagate(free, initial, 1e-3, 2000),
                     ErrorKind::BoundaryContamination);
    CHECK_NOTHROW(crank_nicolson_propagate(free, initial, 1e-3, 2000, {}, 0.0));
  }

  TEST_CASE("second-order spatial convergence") {
    // A packet scattering off the delta barrier, read at x = 2.
    const auto barrier = PotentialModel::delta_barrier(2.0);
    std::vector<Complex> values;
    for (double h : {0.04, 0.02, 0.01}) {
      const auto initial = make_grid_state(-30.0, 30.0, h, [](double x) {
        return gaussian_packet(x, -5.0, 1.0, 1.5);
      });
      values.push_back(value_at(crank_nicolson_propagate(barrier, initial, 2.5e-4, 4000, {}, 0.0), 2.0));
    }
    const double ratio = std::abs(values[2] - values[1]) / std::abs(values[1] - values[0]);
    CHECK(ratio == doctest::Approx(0.25).epsilon(0.05));

    // The propagator element itself: each halving changes it by less than a
    // quarter of the previous change.
    const auto& shell = gktest::delta_shell();
    std::vector<Complex> elements;
    for (double h : {0.01, 0.005, 0.0025}) {
      CnOptions o;
      o.h = h;
      o.richardson_h = false;
      elements.push_back(cn_propagator_elements(shell, 0.5, {0.3}, {0.1}, o).front().value);
    }
    CHECK(std::abs(elements[2] - elements[1]) < 0.25 * std::abs(elements[1] - elements[0]));
  }

  TEST_CASE("free radial propagator") {
    const double r = 0.3, rp = 0.5, t = 0.7;
    const Complex expected = std::pow(4.0 * pi * I * t, -0.5) *
                             (std::exp(I * (r - rp) * (r - rp) / (4.0 * t)) -
                              std::exp(I * (r + rp) * (r + rp) / (4.0 * t)));
    CHECK(std::abs(free_radial_propagator(r, rp, t) - expected) < 1e-15);
    const auto free = PotentialModel::delta_shell(0.0, 1.0);
    for (double tt : {0.1, 1.0, 5.0}) {
      CHECK(std::abs(spectral_quadrature(free, r, rp, tt, spectral_path()) - free_radial_propagator(r, rp, tt)) <
            1e-12);
    }
  }

  TEST_CASE("spectral quadrature") {
    const auto& shell = gktest::delta_shell();
    const Complex g1 = spectral_quadrature(shell, 0.3, 0.5, 1.0, spectral_path());
    CHECK(std::abs(g1 - Complex(-0.469856185877279, -0.877044785917546)) < 1e-12);
    // A different bend picks up different swept poles but the same value.
    const Complex g1b = spectral_quadrature(shell, 0.3, 0.5, 1.0, spectral_path(5.0, pi / 4.0, 8.0));
    CHECK(std::abs(g1 - g1b) < 1e-10);
    const auto well = PotentialModel::square_well(4.0, 1.0);
    CHECK(std::abs(spectral_quadrature(well, 0.3, 0.5, 2.0, spectral_path()) -
                   Complex(0.230230581925, 0.210030672659)) < 1e-10);
    CHECK_ERROR_KIND(spectral_quadrature(shell, 0.3, 0.5, -1.0, spectral_path()), ErrorKind::NonPositiveTime);
    CHECK_ERROR_KIND(spectral_quadrature(PotentialModel::delta_barrier(1.0), 0.3, 0.5, 1.0, spectral_path()),
                     ErrorKind::WrongModelKind);
  }

  TEST_CASE("Crank-Nicolson element against the spectral oracle") {
    const auto& shell = gktest::delta_shell();
    const std::vector<double> rs{0.3, 0.7, 1.4};
    const auto elements = cn_propagator_elements(shell, 0.5, rs, {0.5});
    REQUIRE(elements.size() == 3);
    for (const auto& e : elements) {
      CAPTURE(e.r);
      CHECK(rel_error(e.value, spectral_quadrature(shell, e.r, 0.5, e.t, spectral_path())) < 1e-3);
    }
  }
}
