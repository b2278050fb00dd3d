#include "gamowkit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>

#include "gamowkit/error.hpp"
#include "gamowkit/expand.hpp"
#include "gamowkit/gamow.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/oracle.hpp"
#include "gamowkit/parallel.hpp"
#include "gamowkit/poles.hpp"
#include "gamowkit/steepest.hpp"

namespace gamowkit {

namespace {

constexpr std::pair<Subcommand, std::string_view> kSubcommands[] = {
    {Subcommand::Poles, "poles"},         {Subcommand::Gamow, "gamow"},
    {Subcommand::SumRules, "sumrules"},   {Subcommand::Propagate, "propagate"},
    {Subcommand::Transient, "transient"}, {Subcommand::Berggren, "berggren"},
    {Subcommand::Effective, "effective"}, {Subcommand::Report, "report"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(trim(s.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <class Member>
Field real_field(std::string_view section, std::string_view key, Member member) {
  return {section, key, [member](const RunConfig& c) { return format_number(member(c)); },
          [member](RunConfig& c, std::string_view v) { member(c) = parse_double(v); }};
}

template <class Member>
Field int_field(std::string_view section, std::string_view key, Member member) {
  return {section, key, [member](const RunConfig& c) { return std::to_string(member(c)); },
          [member](RunConfig& c, std::string_view v) { member(c) = parse_integer<int>(v); }};
}

template <class Member>
Field list_field(std::string_view section, std::string_view key, Member member) {
  return {section, key, [member](const RunConfig& c) { return format_list(member(c)); },
          [member](RunConfig& c, std::string_view v) { member(c) = parse_list(v); }};
}

template <class Member>
Field choice_field(std::string_view section, std::string_view key, Member member,
                   std::initializer_list<std::string_view> allowed) {
  std::vector<std::string_view> options(allowed);
  return {section, key, [member](const RunConfig& c) { return member(c); },
          [member, options](RunConfig& c, std::string_view v) {
            for (auto a : options) {
              if (v == a) {
                member(c) = std::string(v);
                return;
              }
            }
            std::string list;
            for (auto a : options) list += (list.empty() ? "" : ", ") + std::string(a);
            throw std::invalid_argument("'" + std::string(v) + "' is not one of " + list);
          }};
}

#define GK_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"", "subcommand", [](const RunConfig& c) { return std::string(to_string(c.subcommand)); },
       [](RunConfig& c, std::string_view v) { c.subcommand = parse_subcommand(v); }},
      int_field("", "threads", GK_REF(threads)),
      {"", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>(v); }},
      {"", "out", [](const RunConfig& c) { return c.out; },
       [](RunConfig& c, std::string_view v) {
         if (v.empty()) throw std::invalid_argument("output directory must not be empty");
         c.out = std::string(v);
       }},
      {"model", "kind", [](const RunConfig& c) { return std::string(to_string(c.model.kind)); },
       [](RunConfig& c, std::string_view v) {
         try {
           c.model.kind = parse_model_kind(v);
         } catch (const Error& e) {
           throw std::invalid_argument(e.what());
         }
       }},
      real_field("model", "lambda", GK_REF(model.lambda)),
      real_field("model", "a", GK_REF(model.a)),
      real_field("model", "v0", GK_REF(model.v0)),
      real_field("model", "d", GK_REF(model.d)),
      real_field("model", "r", GK_REF(model.r)),
      int_field("poles", "count", GK_REF(poles.count)),
      real_field("poles", "re_max", GK_REF(poles.re_max)),
      real_field("poles", "im_min", GK_REF(poles.im_min)),
      int_field("gamow", "count", GK_REF(gamow.count)),
      int_field("gamow", "panels", GK_REF(gamow.panels)),
      int_field("gamow", "order", GK_REF(gamow.order)),
      int_field("sumrules", "units", GK_REF(sumrules.units)),
      real_field("sumrules", "r", GK_REF(sumrules.r)),
      real_field("sumrules", "r_prime", GK_REF(sumrules.r_prime)),
      real_field("sumrules", "bump_center", GK_REF(sumrules.bump_center)),
      real_field("sumrules", "bump_half_width", GK_REF(sumrules.bump_half_width)),
      real_field("sumrules", "closure_r", GK_REF(sumrules.closure_r)),
      choice_field("propagate", "representation", GK_REF(propagate.representation),
                   {"full", "proper", "background", "spectral", "cn"}),
      choice_field("propagate", "tail", GK_REF(propagate.tail), {"subtracted", "plain"}),
      real_field("propagate", "r", GK_REF(propagate.r)),
      real_field("propagate", "r_prime", GK_REF(propagate.r_prime)),
      list_field("propagate", "times", GK_REF(propagate.times)),
      int_field("propagate", "units", GK_REF(propagate.units)),
      choice_field("transient", "packet", GK_REF(transient.packet), {"cutoff", "gaussian"}),
      real_field("transient", "k0", GK_REF(transient.k0)),
      real_field("transient", "x0", GK_REF(transient.x0)),
      real_field("transient", "sigma", GK_REF(transient.sigma)),
      real_field("transient", "mass", GK_REF(transient.mass)),
      real_field("transient", "hbar", GK_REF(transient.hbar)),
      list_field("transient", "x", GK_REF(transient.x)),
      list_field("transient", "times", GK_REF(transient.times)),
      int_field("transient", "n_max", GK_REF(transient.n_max)),
      real_field("berggren", "depth", GK_REF(berggren.depth)),
      real_field("berggren", "re_turn", GK_REF(berggren.re_turn)),
      real_field("berggren", "k_max", GK_REF(berggren.k_max)),
      choice_field("berggren", "weight", GK_REF(berggren.weight), {"identity", "hamiltonian"}),
      real_field("berggren", "f_center", GK_REF(berggren.f_center)),
      real_field("berggren", "f_half_width", GK_REF(berggren.f_half_width)),
      real_field("berggren", "g_center", GK_REF(berggren.g_center)),
      real_field("berggren", "g_half_width", GK_REF(berggren.g_half_width)),
      int_field("berggren", "random_pairs", GK_REF(berggren.random_pairs)),
      int_field("effective", "resonances", GK_REF(effective.resonances)),
      real_field("report", "r", GK_REF(report.r)),
      real_field("report", "r_prime", GK_REF(report.r_prime)),
      real_field("report", "t", GK_REF(report.t)),
      list_field("report", "units", GK_REF(report.units)),
  };
  return table;
}

#undef GK_REF

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Deterministic uniform draw in [lo, hi) independent of the standard library's distributions.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<GamowState> resonance_states(const PotentialModel& model, int n, int threads) {
  std::vector<PoleRecord> poles = bound_states(model);
  const std::vector<PoleRecord> res = first_resonances(model, n, threads);
  poles.insert(poles.end(), res.begin(), res.end());
  return paired_states(model, poles, make_radial_grid(model));
}

int max_units(const std::vector<double>& list) {
  double m = 1.0;
  for (double v : list) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw Error(ErrorKind::InvalidArgument, "unit counts must be positive integers");
    }
    m = std::max(m, v);
  }
  return static_cast<int>(m);
}

std::vector<std::string> run_poles(const RunConfig& c, const PotentialModel& model, int threads) {
  std::vector<PoleRecord> poles;
  if (c.poles.count > 0) {
    if (model.radial()) poles = bound_states(model);
    const auto res = first_resonances(model, c.poles.count, threads);
    poles.insert(poles.end(), res.begin(), res.end());
  } else if (c.poles.count == 0) {
    SearchRegion region = default_region(model);
    if (c.poles.re_max > 0.0) region.re_max = c.poles.re_max;
    if (c.poles.im_min < 0.0) region.im_min = c.poles.im_min;
    poles = find_poles(model, region, threads);
  } else {
    throw Error(ErrorKind::InvalidArgument, "poles.count must be >= 0");
  }
  const std::string csv = join_path(c.out, "poles.csv");
  const std::string json = join_path(c.out, "poles.json");
  write_text_file(csv, poles_to_csv(poles));
  write_text_file(json, poles_to_json(poles) + "\n");
  return {csv, json};
}

std::vector<std::string> run_gamow(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto poles = first_resonances(model, c.gamow.count, threads);
  const RadialGrid grid = make_radial_grid(model, c.gamow.panels, c.gamow.order);
  std::vector<std::string> written;
  CsvTable summary({"index", "re_k", "im_k", "re_norm", "im_norm", "matching_defect"});
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const GamowState state = normalize_gamow(solve_gamow(model, poles[i], grid));
    const Complex norm = state.norm_integral();
    summary.add_row({std::to_string(i + 1), format_number(state.pole.k.real()),
                     format_number(state.pole.k.imag()), format_number(norm.real()),
                     format_number(norm.imag()), format_number(state.matching_defect)});
    const std::string path = join_path(c.out, "gamow_" + std::to_string(i + 1) + ".csv");
    write_text_file(path, gamow_state_to_csv(state));
    written.push_back(path);
  }
  const std::string path = join_path(c.out, "gamow_summary.csv");
  write_text_file(path, summary.str());
  written.insert(written.begin(), path);
  return written;
}

std::vector<std::string> run_sumrules(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto& s = c.sumrules;
  if (s.units < 1) throw Error(ErrorKind::InvalidArgument, "sumrules.units must be >= 1");
  const auto states = resonance_states(model, s.units, threads);
  const Bump bump{s.bump_center, s.bump_half_width, 1.0};
  CsvTable table({"units", "re_inverse_k", "im_inverse_k", "re_closure", "im_closure", "closure_error"});
  const int available = static_cast<int>(pair_states(states).size());
  for (int n = 1; n <= std::min(s.units, available); ++n) {
    const Complex a = sum_rule_inverse_k(states, s.r, s.r_prime, n);
    const Complex b = sum_rule_closure(states, bump, s.closure_r, n);
    table.add_row({std::to_string(n), format_number(a.real()), format_number(a.imag()),
                   format_number(b.real()), format_number(b.imag()),
                   format_number(std::abs(b - bump(s.closure_r)))});
  }
  const std::string path = join_path(c.out, "sumrules.csv");
  write_text_file(path, table.str());
  return {path};
}

std::vector<std::string> run_propagate(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto& p = c.propagate;
  const TailMode mode = p.tail == "plain" ? TailMode::Plain : TailMode::Subtracted;
  std::vector<PropagatorBreakdown> rows;
  if (p.representation == "spectral" || p.representation == "cn") {
    std::vector<Complex> values;
    if (p.representation == "cn") {
      CnOptions options;
      options.threads = threads;
      for (const auto& e : cn_propagator_elements(model, p.r_prime, {p.r}, p.times, options)) {
        values.push_back(e.value);
      }
    } else {
      for (double t : p.times) values.push_back(spectral_quadrature(model, p.r, p.r_prime, t, spectral_path()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      PropagatorBreakdown b;
      b.total = values[i];
      b.t = p.times[i];
      b.r = p.r;
      b.r_prime = p.r_prime;
      rows.push_back(b);
    }
  } else {
    if (p.units < 1) throw Error(ErrorKind::InvalidArgument, "propagate.units must be >= 1");
    const auto states = resonance_states(model, p.units, threads);
    for (double t : p.times) {
      if (p.representation == "full") {
        rows.push_back(propagator_full(states, p.r, p.r_prime, t, p.units, mode));
      } else if (p.representation == "proper") {
        rows.push_back(propagator_proper_form(states, p.r, p.r_prime, t, p.units, mode));
      } else {
        rows.push_back(propagator_proper_plus_background(model, states, p.r, p.r_prime, t));
      }
    }
  }
  const std::string path = join_path(c.out, "propagate.csv");
  write_text_file(path, breakdowns_to_csv(rows));
  return {path};
}

std::vector<std::string> run_transient(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto& s = c.transient;
  const PhysicalUnits units{s.mass, s.hbar};
  const WavePacketSpec spec = s.packet == "gaussian" ? WavePacketSpec::gaussian(s.k0, s.x0, s.sigma, units)
                                                     : WavePacketSpec::cutoff(s.k0, s.x0, units);
  std::vector<TransmittedWave> rows(s.x.size() * s.times.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    rows[i] = transmitted_wave(model, spec, s.x[i / s.times.size()], s.times[i % s.times.size()], s.n_max);
  });
  const std::string path = join_path(c.out, "transient.csv");
  write_text_file(path, transmitted_to_csv(rows));
  return {path};
}

std::vector<std::string> run_berggren(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto& b = c.berggren;
  const Contour contour = Contour::berggren(b.depth, b.re_turn, b.k_max);
  const BerggrenWeight weight = b.weight == "hamiltonian" ? BerggrenWeight::Hamiltonian : BerggrenWeight::Identity;
  std::vector<std::pair<Bump, Bump>> pairs;
  if (b.random_pairs > 0) {
    std::mt19937_64 rng(c.seed);
    const double range = model.range();
    auto draw = [&] {
      const double center = uniform(rng, 0.3, 0.7) * range;
      const double half = uniform(rng, 0.15, 0.95) * std::min(center, range - center);
      return Bump{center, half, 1.0};
    };
    for (int i = 0; i < b.random_pairs; ++i) {
      const Bump f = draw();
      pairs.push_back({f, draw()});
    }
  } else {
    pairs.push_back({Bump{b.f_center, b.f_half_width, 1.0}, Bump{b.g_center, b.g_half_width, 1.0}});
  }
  std::vector<BerggrenResult> results(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    results[i] = berggren_identity(model, pairs[i].first, pairs[i].second, contour, weight);
  });
  CsvTable table({"f_center", "f_half_width", "g_center", "g_half_width", "re_reconstructed",
                  "im_reconstructed", "re_exact", "im_exact", "re_background", "im_background",
                  "n_resonances", "abs_error"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& r = results[i];
    table.add_row({format_number(pairs[i].first.center), format_number(pairs[i].first.half_width),
                   format_number(pairs[i].second.center), format_number(pairs[i].second.half_width),
                   format_number(r.reconstructed.real()), format_number(r.reconstructed.imag()),
                   format_number(r.exact.real()), format_number(r.exact.imag()),
                   format_number(r.background.real()), format_number(r.background.imag()),
                   std::to_string(r.n_resonances), format_number(std::abs(r.reconstructed - r.exact))});
  }
  const std::string path = join_path(c.out, "berggren.csv");
  write_text_file(path, table.str());
  return {path};
}

std::vector<std::string> run_effective(const RunConfig& c, const PotentialModel& model, int threads) {
  if (c.effective.resonances < 1) throw Error(ErrorKind::EmptySelection, "effective.resonances must be >= 1");
  const EffectiveHamiltonian h = effective_hamiltonian(first_resonances(model, c.effective.resonances, threads));
  CsvTable table({"row", "col", "re_h", "im_h"});
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    for (std::size_t j = 0; j < h.dimension(); ++j) {
      table.add_row({std::to_string(i + 1), std::to_string(j + 1), format_number(h(i, j).real()),
                     format_number(h(i, j).imag())});
    }
  }
  const std::string path = join_path(c.out, "effective.csv");
  write_text_file(path, table.str());
  return {path};
}

std::vector<std::string> run_report(const RunConfig& c, const PotentialModel& model, int threads) {
  const auto& r = c.report;
  const int largest = max_units(r.units);
  const auto states = resonance_states(model, largest, threads);
  const Complex oracle = spectral_quadrature(model, r.r, r.r_prime, r.t, spectral_path());
  CsvTable table({"units", "re_expansion", "im_expansion", "re_oracle", "im_oracle", "abs_error", "rel_error"});
  for (double n : r.units) {
    const Complex g = propagator_full(states, r.r, r.r_prime, r.t, static_cast<int>(n)).total;
    table.add_row({std::to_string(static_cast<int>(n)), format_number(g.real()), format_number(g.imag()),
                   format_number(oracle.real()), format_number(oracle.imag()),
                   format_number(std::abs(g - oracle)), format_number(std::abs(g - oracle) / std::abs(oracle))});
  }
  const std::string path = join_path(c.out, "report.csv");
  write_text_file(path, table.str());
  return {path};
}

}  // namespace

std::string_view to_string(Subcommand sub) noexcept {
  for (const auto& [s, name] : kSubcommands) {
    if (s == sub) return name;
  }
  return "unknown";
}

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& [s, n] : kSubcommands) {
    if (n == name) return s;
  }
  throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text, std::vector<std::string>* keys_present) {
  RunConfig config;
  std::set<std::string_view> known_sections{""};
  for (const auto& f : fields()) known_sections.insert(f.section);
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ConfigParse, where + "malformed section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty() || !known_sections.count(name)) {
        throw Error(ErrorKind::ConfigParse, where + "unknown section [" + std::string(name) + "]");
      }
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ConfigParse, where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.section == section && f.key == key) field = &f;
    }
    const std::string qualified = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (field == nullptr) throw Error(ErrorKind::ConfigParse, where + "unknown key '" + qualified + "'");
    if (!seen.insert({section, std::string(key)}).second) {
      throw Error(ErrorKind::ConfigParse, where + "repeated key '" + qualified + "'");
    }
    if (keys_present != nullptr) keys_present->push_back(qualified);
    try {
      field->set(config, value);
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorKind::ConfigParse, where + "key '" + qualified + "': " + e.what());
    } catch (const std::out_of_range& e) {
      throw Error(ErrorKind::ConfigParse, where + "key '" + qualified + "': value out of range");
    }
  }
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string_view current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      out += "\n[" + std::string(f.section) + "]\n";
      current = f.section;
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

int effective_threads(int flag, int config_value) {
  if (flag >= 0) return flag;
  if (const char* env = std::getenv("GAMOWKIT_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int v = parse_integer<int>(trim(env));
      if (v >= 0) return v;
    } catch (const std::invalid_argument&) {
    }
    throw Error(ErrorKind::ConfigParse, "GAMOWKIT_THREADS must be a non-negative integer");
  }
  return config_value;
}

std::vector<std::string> run(const RunConfig& config) {
  if (config.threads < 0) throw Error(ErrorKind::ConfigParse, "threads must be >= 0");
  const PotentialModel model = build_model(config.model);
  std::filesystem::create_directories(config.out);
  const int threads = config.threads;
  switch (config.subcommand) {
    case Subcommand::Poles: return run_poles(config, model, threads);
    case Subcommand::Gamow: return run_gamow(config, model, threads);
    case Subcommand::SumRules: return run_sumrules(config, model, threads);
    case Subcommand::Propagate: return run_propagate(config, model, threads);
    case Subcommand::Transient: return run_transient(config, model, threads);
    case Subcommand::Berggren: return run_berggren(config, model, threads);
    case Subcommand::Effective: return run_effective(config, model, threads);
    case Subcommand::Report: return run_report(config, model, threads);
  }
  throw Error(ErrorKind::InvalidArgument, "unhandled subcommand");
}

}  // namespace gamowkit
