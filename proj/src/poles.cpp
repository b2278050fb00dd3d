#include "gamowkit/poles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gamowkit/error.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/parallel.hpp"
#include "json.hpp"

namespace gamowkit {

namespace {

constexpr double kOnAxis = 1e-12;
constexpr double kMergeDistance = 1e-8;

struct Cell {
  double re0, re1, im0, im1;

  Complex center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
  double size() const { return std::max(re1 - re0, im1 - im0); }
  double radius() const { return 0.5 * std::hypot(re1 - re0, im1 - im0); }
  bool contains(Complex z, double slack) const {
    return z.real() >= re0 - slack && z.real() <= re1 + slack && z.imag() >= im0 - slack &&
           z.imag() <= im1 + slack;
  }
};

double model_scale(const PotentialModel& model) {
  if (model.range() > 0.0) return model.range();
  return model.strength() != 0.0 ? 2.0 / std::abs(model.strength()) : 1.0;
}

class PhaseTracker {
 public:
  explicit PhaseTracker(const PotentialModel& model, double scale)
      : model_(model), min_step_(1e-13 * scale) {}

  // Total change of arg F along z0 -> z1.
  double edge(Complex z0, Complex z1) const {
    const int pieces = std::max(32, static_cast<int>(std::ceil(std::abs(z1 - z0) * 8.0)));
    double total = 0.0;
    Complex za = z0;
    Complex fa = value(za);
    for (int i = 1; i <= pieces; ++i) {
      const Complex zb = z0 + (z1 - z0) * (static_cast<double>(i) / pieces);
      const Complex fb = value(zb);
      total += segment(za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
    return total;
  }

  double winding(const Cell& c) const {
    return winding({{c.re0, c.im0}, {c.re1, c.im0}, {c.re1, c.im1}, {c.re0, c.im1}});
  }

  double winding(const std::vector<Complex>& polygon) const {
    double total = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      total += edge(polygon[i], polygon[(i + 1) % polygon.size()]);
    }
    const double turns = total / (2.0 * pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-3) {
      throw Error(ErrorKind::ZeroOnBoundary, "phase winding is not an integer");
    }
    return rounded;
  }

 private:
  Complex value(Complex z) const {
    const Complex f = pole_function(model_, z);
    if (f == 0.0 || !is_finite(f)) {
      throw Error(ErrorKind::ZeroOnBoundary, "pole function vanishes on the contour");
    }
    return f;
  }

  double segment(Complex z0, Complex f0, Complex z1, Complex f1, int depth) const {
    const double jump = std::arg(f1 / f0);
    const Complex zm = 0.5 * (z0 + z1);
    const Complex fm = value(zm);
    const double left = std::arg(fm / f0);
    const double right = std::arg(f1 / fm);
    if (std::abs(jump) < pi / 2 && std::abs(left) < pi / 2 && std::abs(right) < pi / 2 &&
        std::abs(left + right - jump) < 1e-6) {
      return jump;
    }
    if (depth > 60 || std::abs(z1 - z0) < min_step_) {
      throw Error(ErrorKind::ZeroOnBoundary,
                  "zero on or next to the contour near k = " + format_number(zm.real()) + " " +
                      format_number(zm.imag()) + "i");
    }
    return segment(z0, f0, zm, fm, depth + 1) + segment(zm, fm, z1, f1, depth + 1);
  }

  const PotentialModel& model_;
  double min_step_;
};

int cell_count(const PotentialModel& model, const Cell& cell, double scale) {
  return static_cast<int>(PhaseTracker(model, scale).winding(cell));
}

struct NewtonResult {
  Complex k;
  bool converged = false;
  int iterations = 0;
};

NewtonResult newton_in_cell(const PotentialModel& model, const Cell& cell, Complex start) {
  NewtonResult result{start};
  const double radius = cell.radius();
  const double slack = 1e-9 * cell.size();
  int clamped_in_a_row = 0;
  for (int it = 1; it <= 100; ++it) {
    const Complex f = pole_function(model, result.k);
    const Complex df = pole_function_derivative(model, result.k);
    result.iterations = it;
    if (f == 0.0) {
      result.converged = true;
      return result;
    }
    if (df == 0.0 || !is_finite(df)) return result;
    Complex step = f / df;
    if (std::abs(step) > radius) step *= radius / std::abs(step);
    Complex next = result.k - step;
    if (!cell.contains(next, slack)) {
      next = {std::clamp(next.real(), cell.re0, cell.re1), std::clamp(next.imag(), cell.im0, cell.im1)};
      if (++clamped_in_a_row >= 3) return result;
    } else {
      clamped_in_a_row = 0;
    }
    const double moved = std::abs(next - result.k);
    result.k = next;
    if (moved <= 4e-16 * std::max(1.0, std::abs(result.k))) {
      result.converged = true;
      return result;
    }
  }
  // Stagnation at roundoff level still counts if the residual is met.
  result.converged = std::abs(dispersion(model, result.k)) < pole_residual_tolerance(model, result.k);
  return result;
}

// Split fractions tried in turn when a cut happens to pass through a zero.
constexpr std::array<double, 5> kSplits = {0.5, 0.4713, 0.5291, 0.4127, 0.5873};

void search_cell(const PotentialModel& model, const Cell& cell, int count, int depth,
                 int max_depth, double scale, std::vector<PoleRecord>& out) {
  if (count <= 0) return;
  if (count == 1) {
    const NewtonResult nr = newton_in_cell(model, cell, cell.center());
    if (nr.converged && cell.contains(nr.k, 1e-9 * cell.size()) &&
        std::abs(dispersion(model, nr.k)) < pole_residual_tolerance(model, nr.k)) {
      out.push_back(make_pole_record(model, nr.k, nr.iterations));
      return;
    }
    if (depth >= max_depth) {
      throw Error(ErrorKind::NewtonStall,
                  "no convergence in cell [" + format_number(cell.re0) + ", " +
                      format_number(cell.re1) + "] x [" + format_number(cell.im0) + ", " +
                      format_number(cell.im1) + "]");
    }
  } else if (depth >= max_depth) {
    throw Error(ErrorKind::NewtonStall, "cell at maximum depth still holds " +
                                            std::to_string(count) + " zeros");
  }
  const bool split_re = (cell.re1 - cell.re0) >= (cell.im1 - cell.im0);
  for (double frac : kSplits) {
    Cell lo = cell;
    Cell hi = cell;
    if (split_re) {
      const double cut = cell.re0 + frac * (cell.re1 - cell.re0);
      lo.re1 = cut;
      hi.re0 = cut;
    } else {
      const double cut = cell.im0 + frac * (cell.im1 - cell.im0);
      lo.im1 = cut;
      hi.im0 = cut;
    }
    int c_lo = 0;
    int c_hi = 0;
    try {
      c_lo = cell_count(model, lo, scale);
      c_hi = cell_count(model, hi, scale);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ZeroOnBoundary) continue;
      throw;
    }
    if (c_lo + c_hi != count) continue;
    search_cell(model, lo, c_lo, depth + 1, max_depth, scale, out);
    search_cell(model, hi, c_hi, depth + 1, max_depth, scale, out);
    return;
  }
  throw Error(ErrorKind::ZeroOnBoundary, "could not place a cut that avoids every zero");
}

Cell to_cell(const SearchRegion& region) {
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max)) {
    throw Error(ErrorKind::InvalidArgument, "search region corners are not ordered");
  }
  return {region.re_min, region.re_max, region.im_min, region.im_max};
}

Cell nudged(const Cell& c) {
  const double d = 1e-6 * c.size();
  return {c.re0 - d, c.re1 + d, c.im0 - d, c.im1 + d};
}

std::vector<PoleRecord> deduplicate(std::vector<PoleRecord> poles) {
  std::sort(poles.begin(), poles.end(), [](const PoleRecord& x, const PoleRecord& y) {
    if (x.k.real() != y.k.real()) return x.k.real() < y.k.real();
    return x.k.imag() < y.k.imag();
  });
  std::vector<PoleRecord> out;
  for (const auto& p : poles) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const PoleRecord& q) {
      return std::abs(q.k - p.k) < kMergeDistance;
    });
    if (!dup) out.push_back(p);
  }
  return out;
}

}  // namespace

std::string_view to_string(PoleClass cls) noexcept {
  switch (cls) {
    case PoleClass::Bound: return "bound";
    case PoleClass::Virtual: return "virtual";
    case PoleClass::Resonance: return "resonance";
    case PoleClass::AntiResonance: return "anti_resonance";
  }
  return "unknown";
}

PoleClass classify_pole(Complex k) {
  const double re = k.real();
  const double im = k.imag();
  if (std::abs(re) < kOnAxis && std::abs(im) < kOnAxis) {
    throw Error(ErrorKind::AmbiguousOnAxis, "k = 0 has no pole class");
  }
  if (std::abs(re) < kOnAxis) return im > 0.0 ? PoleClass::Bound : PoleClass::Virtual;
  if (im > kOnAxis) {
    throw Error(ErrorKind::InvalidArgument, "no pole class off the imaginary axis in the upper half plane");
  }
  return re > 0.0 ? PoleClass::Resonance : PoleClass::AntiResonance;
}

double pole_residual_tolerance(const PotentialModel& model, Complex k) {
  const double roundoff = 64.0 * 2.220446049250313e-16 * std::abs(k) *
                          std::abs(dispersion_derivative(model, k));
  return 1e-10 + roundoff;
}

bool is_proper(Complex k) { return k.real() > std::abs(k.imag()) && k.imag() < 0.0; }

PoleRecord make_pole_record(const PotentialModel& model, Complex k, int newton_iterations) {
  // Zeros of these models come in pairs k, -k*; an isolated zero next to the
  // imaginary axis therefore sits on it.
  if (k.real() != 0.0 && std::abs(k.real()) < 1e-10 * std::abs(k)) {
    const Complex snapped(0.0, k.imag());
    if (std::abs(dispersion(model, snapped)) <= std::abs(dispersion(model, k)) * 10.0 + 1e-14) {
      k = snapped;
    }
  }
  PoleRecord record;
  record.k = k;
  record.cls = classify_pole(k);
  record.proper = record.cls == PoleClass::Resonance && is_proper(k);
  record.dDdk = dispersion_derivative(model, k);
  record.residual = std::abs(dispersion(model, k));
  record.newton_iterations = newton_iterations;
  return record;
}

SearchRegion default_region(const PotentialModel& model) {
  const double l = model_scale(model);
  SearchRegion region;
  region.re_min = -0.01 / l;
  region.re_max = 15.0 * pi / l;
  region.im_min = -3.0 / l;
  region.im_max = 5.0 / l;
  return region;
}

int count_zeros(const PotentialModel& model, const SearchRegion& region) {
  const Cell cell = to_cell(region);
  const double scale = cell.size();
  try {
    return cell_count(model, cell, scale);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroOnBoundary) throw;
  }
  return cell_count(model, nudged(cell), scale);
}

std::vector<PoleRecord> find_poles(const PotentialModel& model, const SearchRegion& region,
                                   int threads) {
  Cell whole = to_cell(region);
  const double scale = whole.size();
  try {
    cell_count(model, whole, scale);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroOnBoundary) throw;
    whole = nudged(whole);
  }

  // Columns roughly one zero spacing (pi / range) wide.
  const double spacing = pi / model_scale(model);
  const int columns =
      std::clamp(static_cast<int>(std::ceil((whole.re1 - whole.re0) / spacing)), 1, 256);
  std::vector<double> cuts(columns + 1);
  for (int j = 0; j <= columns; ++j) {
    const double jitter = (j == 0 || j == columns) ? 0.0 : 0.0137 * std::sin(2.3 * j);
    cuts[j] = whole.re0 + (whole.re1 - whole.re0) * (j + jitter) / columns;
  }
  std::vector<std::vector<PoleRecord>> found(columns);
  std::vector<int> counts(columns, 0);
  parallel_for(columns, threads, [&](std::size_t j) {
    const Cell col{cuts[j], cuts[j + 1], whole.im0, whole.im1};
    counts[j] = cell_count(model, col, scale);
    search_cell(model, col, counts[j], 0, region.depth, scale, found[j]);
  });
  std::vector<PoleRecord> all;
  int expected = 0;
  for (int j = 0; j < columns; ++j) {
    expected += counts[j];
    all.insert(all.end(), found[j].begin(), found[j].end());
  }
  all = deduplicate(std::move(all));
  if (static_cast<int>(all.size()) != expected) {
    throw Error(ErrorKind::NoConvergence, "found " + std::to_string(all.size()) +
                                              " distinct zeros, winding count is " +
                                              std::to_string(expected));
  }
  return all;
}

std::vector<PoleRecord> first_resonances(const PotentialModel& model, int n, int threads) {
  if (n <= 0) return {};
  const double l = model_scale(model);
  SearchRegion region;
  region.re_min = 1e-7 / l;
  region.re_max = 1.25 * (n + 1) * pi / l;
  region.im_min = -3.0 / l;
  region.im_max = 0.5 / l;
  for (int attempt = 0; attempt < 12; ++attempt) {
    std::vector<PoleRecord> res;
    for (const auto& p : find_poles(model, region, threads)) {
      if (p.cls == PoleClass::Resonance) res.push_back(p);
    }
    if (static_cast<int>(res.size()) < n) {
      region.re_max *= 1.5;
      region.im_min *= 1.5;
      continue;
    }
    res.resize(n);
    SearchRegion deeper = region;
    deeper.re_max = res.back().k.real() * (1.0 + 1e-9) + 1e-9;
    deeper.im_max = region.im_min;
    deeper.im_min = 2.0 * region.im_min;
    if (count_zeros(model, deeper) == 0) return res;
    region.im_min *= 2.0;
  }
  throw Error(ErrorKind::NoConvergence,
              "could not isolate the first " + std::to_string(n) + " resonances");
}

int count_zeros_in_polygon(const PotentialModel& model, const std::vector<Complex>& vertices) {
  if (vertices.size() < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs three vertices");
  double extent = 0.0;
  for (const auto& v : vertices) extent = std::max(extent, std::abs(v - vertices.front()));
  return static_cast<int>(PhaseTracker(model, extent).winding(vertices));
}

std::vector<PoleRecord> bound_states(const PotentialModel& model) {
  if (!model.radial()) throw Error(ErrorKind::WrongModelKind, "bound states need a radial model");
  const double l = model.range();
  double kappa_max = 0.0;
  if (model.kind() == ModelKind::RadialSquareWell && model.strength() > 0.0) {
    kappa_max = std::sqrt(model.strength());
  } else if (model.kind() == ModelKind::RadialDeltaShell && model.strength() < 0.0) {
    kappa_max = 0.5 * std::abs(model.strength());
  }
  if (kappa_max == 0.0) return {};
  SearchRegion region;
  region.re_min = -0.01 / l;
  region.re_max = 0.01 / l;
  region.im_min = 1e-7 / l;
  region.im_max = kappa_max + 1.0 / l;
  std::vector<PoleRecord> out;
  for (const auto& p : find_poles(model, region)) {
    if (p.cls == PoleClass::Bound) out.push_back(p);
  }
  return out;
}

PoleRecord mirror_pole(const PotentialModel& model, const PoleRecord& pole) {
  return make_pole_record(model, -std::conj(pole.k), pole.newton_iterations);
}

std::string poles_to_csv(const std::vector<PoleRecord>& poles) {
  CsvTable table({"re_k", "im_k", "class", "proper", "residual"});
  for (const auto& p : poles) {
    table.add_row({format_number(p.k.real()), format_number(p.k.imag()),
                   std::string(to_string(p.cls)), p.proper ? "true" : "false",
                   format_number(p.residual)});
  }
  return table.str();
}

std::string poles_to_json(const std::vector<PoleRecord>& poles) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& p : poles) {
    nlohmann::ordered_json rec;
    rec["re_k"] = p.k.real();
    rec["im_k"] = p.k.imag();
    rec["class"] = std::string(to_string(p.cls));
    rec["proper"] = p.proper;
    rec["residual"] = p.residual;
    rec["re_dDdk"] = p.dDdk.real();
    rec["im_dDdk"] = p.dDdk.imag();
    array.push_back(std::move(rec));
  }
  return array.dump(2) + "\n";
}

}  // namespace gamowkit
