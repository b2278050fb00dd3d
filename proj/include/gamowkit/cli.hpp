#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gamowkit/model.hpp"

namespace gamowkit {

enum class Subcommand { Poles, Gamow, SumRules, Propagate, Transient, Berggren, Effective, Report };

std::string_view to_string(Subcommand sub) noexcept;
Subcommand parse_subcommand(std::string_view name);

/// Everything a CLI run needs. The text form is flat `key = value` lines:
/// top-level keys first, then one [section] per subcommand plus [model].
/// Lists are comma separated.
struct RunConfig {
  Subcommand subcommand = Subcommand::Poles;
  int threads = 0;
  std::uint64_t seed = 1;
  std::string out = ".";

  ModelSpec model{};

  struct Poles {
    int count = 0;        // 0: every pole of the default search region
    double re_max = 0.0;  // 0: default region
    double im_min = 0.0;  // 0: default region
    bool operator==(const Poles&) const = default;
  } poles;

  struct Gamow {
    int count = 3;
    int panels = 8;
    int order = 32;
    bool operator==(const Gamow&) const = default;
  } gamow;

  struct SumRules {
    int units = 40;
    double r = 0.3;
    double r_prime = 0.5;
    double bump_center = 0.5;
    double bump_half_width = 0.3;
    double closure_r = 0.5;
    bool operator==(const SumRules&) const = default;
  } sumrules;

  struct Propagate {
    std::string representation = "full";  // full, proper, background, spectral, cn
    std::string tail = "subtracted";      // subtracted, plain
    double r = 0.3;
    double r_prime = 0.5;
    std::vector<double> times{0.1, 0.5, 1.0, 5.0};
    int units = 20;
    bool operator==(const Propagate&) const = default;
  } propagate;

  struct Transient {
    std::string packet = "cutoff";  // cutoff, gaussian
    double k0 = 1.5;
    double x0 = 0.0;
    double sigma = 1.0;
    double mass = 0.5;
    double hbar = 1.0;
    std::vector<double> x{0.5, 2.0, 5.0};
    std::vector<double> times{0.5, 1.0, 2.0, 5.0};
    int n_max = 12;
    bool operator==(const Transient&) const = default;
  } transient;

  struct Berggren {
    double depth = 0.3;
    double re_turn = 7.0;
    double k_max = 10.0;
    std::string weight = "identity";  // identity, hamiltonian
    double f_center = 0.45;
    double f_half_width = 0.35;
    double g_center = 0.5;
    double g_half_width = 0.3;
    int random_pairs = 0;  // > 0: draw this many bump pairs from `seed` instead
    bool operator==(const Berggren&) const = default;
  } berggren;

  struct Effective {
    int resonances = 2;
    bool operator==(const Effective&) const = default;
  } effective;

  struct Report {
    double r = 0.3;
    double r_prime = 0.5;
    double t = 1.0;
    std::vector<double> units{5, 10, 20, 40, 80};
    bool operator==(const Report&) const = default;
  } report;

  bool operator==(const RunConfig&) const = default;
};

/// Strict: unknown sections or keys, repeated keys and malformed values raise
/// ConfigParse with the line number. Missing keys keep their defaults; the
/// keys that were given ("section.key") are appended to `keys_present`.
RunConfig parse_config(std::string_view text, std::vector<std::string>* keys_present = nullptr);
/// Canonical text: every key, fixed order, shortest round-trip numbers.
std::string serialize_config(const RunConfig& config);

/// Runs the configured pipeline and writes its CSV (and JSON) files into
/// config.out. Returns the paths written, in order.
std::vector<std::string> run(const RunConfig& config);

/// --threads flag if given (>= 0), else GAMOWKIT_THREADS, else the config value.
int effective_threads(int flag, int config_value);

}  // namespace gamowkit
