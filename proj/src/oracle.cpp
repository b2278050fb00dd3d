#include "gamowkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gamowkit/error.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/parallel.hpp"
#include "gamowkit/poles.hpp"
#include "gamowkit/quadrature.hpp"

namespace gamowkit {

namespace {

std::vector<double> grid_potential(const PotentialModel& model, const GridState& s) {
  const std::size_t n = s.values.size();
  std::vector<double> v(n, 0.0);
  const double eps = 1e-9 * s.h;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = s.x(j);
    v[j] = 0.5 * (model.smooth_potential(x - eps) + model.smooth_potential(x + eps));
  }
  if (model.has_delta()) {
    const double p = (model.delta_position() - s.x_min) / s.h - 1.0;
    const double j0 = std::floor(p);
    const double theta = p - j0;
    auto deposit = [&](double index, double weight) {
      if (weight == 0.0) return;
      if (index < 0.0 || index >= static_cast<double>(n)) {
        throw Error(ErrorKind::InvalidArgument, "delta term lies outside the grid");
      }
      v[static_cast<std::size_t>(index)] += model.strength() * weight / s.h;
    };
    if (theta < 1e-9) {
      deposit(j0, 1.0);
    } else if (theta > 1.0 - 1e-9) {
      deposit(j0 + 1.0, 1.0);
    } else {
      deposit(j0, 1.0 - theta);
      deposit(j0 + 1.0, theta);
    }
  }
  return v;
}

double guard_norm(const GridState& s, double fraction, bool both_ends) {
  const std::size_t n = s.values.size();
  const auto band = static_cast<std::size_t>(fraction * static_cast<double>(n));
  double sum = 0.0;
  for (std::size_t j = n - band; j < n; ++j) sum += std::norm(s.values[j]);
  if (both_ends) {
    for (std::size_t j = 0; j < band; ++j) sum += std::norm(s.values[j]);
  }
  return sum * s.h;
}

// Four-point Lagrange interpolation of the grid values at x.
Complex interpolate(const GridState& s, double x) {
  const double p = (x - s.x_min) / s.h - 1.0;
  const auto n = static_cast<long>(s.values.size());
  long j = static_cast<long>(std::floor(p)) - 1;
  j = std::clamp(j, 0L, n - 4);
  Complex sum = 0.0;
  for (long a = 0; a < 4; ++a) {
    double w = 1.0;
    for (long b = 0; b < 4; ++b) {
      if (b != a) w *= (p - static_cast<double>(j + b)) / static_cast<double>(a - b);
    }
    sum += w * s.values[static_cast<std::size_t>(j + a)];
  }
  return sum;
}

double normalized_gaussian(double x, double center, double sigma) {
  const double z = (x - center) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * pi));
}

// Residue of f at z0 from the trapezoid rule on a circle.
Complex circle_residue(const std::function<Complex(Complex)>& f, Complex z0, double rho) {
  constexpr int nodes = 64;
  Complex sum = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex offset = rho * std::exp(I * (2.0 * pi * (j + 0.5) / nodes));
    sum += f(z0 + offset) * offset;
  }
  return sum / static_cast<double>(nodes);
}

double isolating_radius(const PotentialModel& model, Complex k, double limit) {
  double rho = std::min({0.1 / model.range(), 0.25 * std::abs(k), limit});
  for (int attempt = 0; attempt < 6; ++attempt, rho *= 0.5) {
    SearchRegion box{k.real() - 1.5 * rho, k.real() + 1.5 * rho, k.imag() - 1.5 * rho,
                     k.imag() + 1.5 * rho};
    if (count_zeros(model, box) == 1) return rho;
  }
  throw Error(ErrorKind::PoleTooClose, "cannot isolate the pole for a residue");
}

double distance_to_segment(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double s = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(z - (a + s * d));
}

}  // namespace

double GridState::norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * h;
}

GridState make_grid_state(double x_min, double x_max, double h,
                          const std::function<Complex(double)>& psi0) {
  if (!(h > 0.0) || !(x_max > x_min + 4.0 * h)) {
    throw Error(ErrorKind::InvalidArgument, "grid needs h > 0 and at least four interior nodes");
  }
  GridState s;
  s.x_min = x_min;
  s.h = h;
  const auto n = static_cast<std::size_t>(std::llround((x_max - x_min) / h)) - 1;
  s.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) s.values[j] = psi0(s.x(j));
  return s;
}

GridState crank_nicolson_propagate(const PotentialModel& model, const GridState& initial, double dt,
                                   int steps, const PhysicalUnits& units, double guard_fraction) {
  if (!(dt > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time step must be positive");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "step count must be >= 0");
  GridState s = initial;
  const std::size_t n = s.values.size();
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "grid too small");
  const double scale = units.hbar / (2.0 * units.mass);
  const std::vector<double> v = grid_potential(model, s);
  const double inv_h2 = 1.0 / (s.h * s.h);
  const Complex half = I * (0.5 * dt * scale);
  const Complex off = -half * inv_h2;  // off-diagonal of I + i dt/2 H
  std::vector<Complex> diag_a(n), diag_b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double hjj = 2.0 * inv_h2 + v[j];
    diag_a[j] = 1.0 + half * hjj;
    diag_b[j] = 1.0 - half * hjj;
  }
  // Thomas factorization of A, reused every step.
  std::vector<Complex> c_prime(n), inv_den(n);
  inv_den[0] = 1.0 / diag_a[0];
  c_prime[0] = off * inv_den[0];
  for (std::size_t j = 1; j < n; ++j) {
    inv_den[j] = 1.0 / (diag_a[j] - off * c_prime[j - 1]);
    c_prime[j] = off * inv_den[j];
  }
  std::vector<Complex> rhs(n);
  auto& psi = s.values;
  for (int step = 0; step < steps; ++step) {
    // rhs = B psi, with B's off-diagonal equal to -off.
    rhs[0] = diag_b[0] * psi[0] - off * psi[1];
    for (std::size_t j = 1; j + 1 < n; ++j) rhs[j] = diag_b[j] * psi[j] - off * (psi[j - 1] + psi[j + 1]);
    rhs[n - 1] = diag_b[n - 1] * psi[n - 1] - off * psi[n - 2];
    psi[0] = rhs[0] * inv_den[0];
    for (std::size_t j = 1; j < n; ++j) psi[j] = (rhs[j] - off * psi[j - 1]) * inv_den[j];
    for (std::size_t j = n - 1; j-- > 0;) psi[j] -= c_prime[j] * psi[j + 1];
  }
  s.t += dt * steps;
  if (guard_fraction > 0.0) {
    const double total = s.norm();
    const double outside = guard_norm(s, guard_fraction, !model.radial());
    if (outside > 1e-6 * std::max(total, 1e-300)) {
      throw Error(ErrorKind::BoundaryContamination,
                  "guard band holds " + format_number(outside / total) + " of the norm");
    }
  }
  return s;
}

std::vector<CnElement> cn_propagator_elements(const PotentialModel& model, double r_prime,
                                              const std::vector<double>& rs,
                                              const std::vector<double>& ts,
                                              const CnOptions& options) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, "propagator elements need a radial model");
  if (!(r_prime > 0.0)) throw Error(ErrorKind::InvalidArgument, "source position must be positive");
  for (double r : rs) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "readout positions must be positive");
  }
  for (double t : ts) {
    if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "times must be positive");
  }
  if (ts.empty() || rs.empty()) return {};
  if (options.h < 0.0 || options.dt < 0.0 || options.sigma < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "grid step, dt and sigma must be non-negative");
  }
  const double range = model.range() > 0.0 ? model.range() : 1.0;
  const double r_max = std::max(r_prime, *std::max_element(rs.begin(), rs.end()));
  // Put the shell (or the well edge) on a node at both grid levels.
  auto coarse_step = [&](double t) {
    const double h = options.h > 0.0 ? options.h : std::clamp(0.005 * std::sqrt(t / 0.1), 0.005, 0.02);
    return range / std::max(1.0, std::round(range / h));
  };

  auto width = [&](double h, double h_coarse) {
    return options.sigma > 0.0 ? options.sigma * h / h_coarse : 5.0 * h;
  };
  auto run = [&](double h, double h_coarse, double t, double dt_target) {
    const double sigma = width(h, h_coarse);
    const int steps = std::max(1, static_cast<int>(std::ceil(t / dt_target - 1e-9)));
    const double dt = t / steps;
    // Fastest Crank-Nicolson group velocity 2k / (1 + (dt k^2 / 2)^2), capped by
    // the lattice's 2/h; reflections off the far wall must not return in time.
    const double k_star = std::sqrt(2.0 / (std::sqrt(3.0) * dt));
    const double v_max = std::min(1.5 * k_star, 2.0 / h);
    const double box = options.box > 0.0 ? options.box
                                         : 1.15 * (v_max * t + 2.0 * r_max) / 2.0 + 10.0 * sigma + 1.0;
    auto source = [&](double x) -> Complex {
      if (!options.richardson_width) return normalized_gaussian(x, r_prime, sigma);
      // Widths sigma, sqrt2 sigma, sqrt3 sigma; the weights cancel the sigma^2 and sigma^4 smearing.
      return 3.0 * normalized_gaussian(x, r_prime, sigma) -
             3.0 * normalized_gaussian(x, r_prime, sigma * std::sqrt(2.0)) +
             normalized_gaussian(x, r_prime, sigma * std::sqrt(3.0));
    };
    GridState state = make_grid_state(0.0, h * std::ceil(box / h), h, source);
    state = crank_nicolson_propagate(model, state, dt, steps, PhysicalUnits{}, 0.0);
    std::vector<Complex> out;
    for (double r : rs) out.push_back(interpolate(state, r));
    return out;
  };
  // Crank-Nicolson slows wavenumbers above sqrt(2/dt) almost to rest. The step
  // is chosen so the source's highest wavenumber 5/sigma still clears the
  // readout region by time t.
  auto auto_dt = [&](double h, double h_coarse, double t) {
    const double sigma = width(h, h_coarse);
    const double k = 5.0 / sigma;
    const double clear = 2.0 * r_max + 2.0;
    const double escape = 2.0 / (k * k) * std::sqrt(std::max(2.0 * k * t / clear - 1.0, 0.0));
    return std::min(1e-3 * std::min(1.0, t), std::max(0.16 * sigma * sigma, escape));
  };
  auto level = [&](double h, double h_coarse, double t) {
    const double dt = options.dt > 0.0 ? options.dt : auto_dt(h, h_coarse, t);
    std::vector<Complex> values = run(h, h_coarse, t, dt);
    if (options.richardson_dt) {
      const std::vector<Complex> fine = run(h, h_coarse, t, 0.5 * dt);
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = (4.0 * fine[i] - values[i]) / 3.0;
    }
    return values;
  };

  std::vector<std::vector<Complex>> per_time(ts.size());
  parallel_for(ts.size(), resolve_threads(options.threads), [&](std::size_t i) {
    const double h = coarse_step(ts[i]);
    std::vector<Complex> values = level(h, h, ts[i]);
    if (options.richardson_h) {
      const std::vector<Complex> fine = level(0.5 * h, h, ts[i]);
      for (std::size_t j = 0; j < values.size(); ++j) values[j] = (4.0 * fine[j] - values[j]) / 3.0;
    }
    per_time[i] = std::move(values);
  });
  std::vector<CnElement> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < rs.size(); ++j) out.push_back({rs[j], ts[i], per_time[i][j]});
  }
  return out;
}

Contour spectral_path(double k0, double theta, double reach) {
  if (!(k0 > 0.0) || !(theta > 0.0 && theta < 0.5 * pi)) {
    throw Error(ErrorKind::InvalidArgument, "spectral path needs k0 > 0 and 0 < theta < pi/2");
  }
  Contour c;
  c.label = ContourLabel::Custom;
  // A non-positive reach is extended to the decay length at evaluation time.
  c.vertices = {0.0, k0, k0 + std::max(reach, 1.0) * std::exp(Complex(0.0, -theta))};
  return c;
}

Complex spectral_quadrature(const PotentialModel& model, double r, double r_prime, double t,
                            const Contour& path) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, "spectral quadrature needs a radial model");
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive");
  if (path.vertices.size() < 2 || path.vertices.front() != Complex(0.0)) {
    throw Error(ErrorKind::InvalidArgument, "spectral path must start at k = 0");
  }
  // The last segment is the ray; extend it far enough for exp(-i k^2 t) to die.
  std::vector<Complex> v = path.vertices;
  const Complex corner = v[v.size() - 2];
  Complex dir = v.back() - corner;
  if (dir.imag() >= 0.0 || v.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "spectral path must end on a ray into the fourth quadrant");
  }
  dir /= std::abs(dir);
  const double sin2 = std::sin(-2.0 * std::arg(dir));
  const double needed = std::sqrt(40.0 / (t * std::max(sin2, 1e-3))) + 2.0;
  if (std::abs(v.back() - corner) < needed) v.back() = corner + needed * dir;

  auto kernel = [&](Complex k) {
    return 2.0 * k * std::exp(-I * k * k * t) *
           (green_outgoing(model, r, r_prime, k) - green_outgoing(model, r, r_prime, -k));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20000;
  Complex integral = 0.0;
  double error = 0.0;
  for (std::size_t s = 0; s + 1 < v.size(); ++s) {
    const QuadratureResult q = integrate_segment(kernel, v[s], v[s + 1], opts);
    integral += q.value;
    error += q.error;
  }
  if (!(error < 1e-8)) {
    throw Error(ErrorKind::NoConvergence, "spectral quadrature error " + format_number(error));
  }
  Complex g = I / (2.0 * pi) * integral;

  auto green_kernel = [&](Complex k) {
    return 2.0 * k * std::exp(-I * k * k * t) * green_outgoing(model, r, r_prime, k);
  };
  for (const auto& b : bound_states(model)) {
    g += circle_residue(green_kernel, b.k, isolating_radius(model, b.k, 0.5 * b.k.imag()));
  }

  // Fourth-quadrant poles between the real axis and the bent path.
  auto below_path = [&](Complex k) {
    // The path is the graph of a function of Re k; the ray continues past its end.
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const double x0 = v[s].real();
      const double x1 = v[s + 1].real();
      const bool last = s + 2 == v.size();
      if (k.real() >= x0 && (k.real() <= x1 || last) && x1 > x0) {
        const double y = v[s].imag() + (k.real() - x0) / (x1 - x0) * (v[s + 1].imag() - v[s].imag());
        return k.imag() < y;
      }
    }
    return true;
  };
  double path_depth = 0.0;
  for (const auto& z : v) path_depth = std::min(path_depth, z.imag());
  const double l = model.range();
  const double width = std::max(4.0 * pi / l, 2.0);
  double lo = 0.0;
  for (int chunk = 0; chunk < 400; ++chunk, lo += width) {
    SearchRegion box{lo + 1e-9, lo + width, std::max(path_depth, -30.0 / l) - 1e-3, -1e-9};
    Complex added = 0.0;
    for (const auto& p : find_poles(model, box)) {
      if (p.cls != PoleClass::Resonance || below_path(p.k)) continue;
      double clearance = 1e300;
      for (std::size_t s = 0; s + 1 < v.size(); ++s) {
        clearance = std::min(clearance, distance_to_segment(p.k, v[s], v[s + 1]));
      }
      if (clearance < 1e-3) throw Error(ErrorKind::PoleTooClose, "pole next to the spectral path");
      added += circle_residue(green_kernel, p.k, isolating_radius(model, p.k, 0.5 * clearance));
    }
    g += added;
    if (lo + width > v.back().real() && std::abs(added) < 1e-16 * std::max(1.0, std::abs(g))) {
      return g;
    }
  }
  throw Error(ErrorKind::NoConvergence, "swept pole residues do not decay");
}

Complex free_radial_propagator(double r, double r_prime, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive");
  const Complex pref = 1.0 / std::sqrt(4.0 * pi * I * t);
  const double dm = r - r_prime;
  const double dp = r + r_prime;
  return pref * (std::exp(I * dm * dm / (4.0 * t)) - std::exp(I * dp * dp / (4.0 * t)));
}

std::string grid_state_to_csv(const GridState& state) {
  CsvTable table({"x", "re_psi", "im_psi"});
  for (std::size_t j = 0; j < state.values.size(); ++j) {
    table.add_row({format_number(state.x(j)), format_number(state.values[j].real()),
                   format_number(state.values[j].imag())});
  }
  return table.str();
}

}  // namespace gamowkit
