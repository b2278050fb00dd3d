#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gamowkit/cli.hpp"
#include "support.hpp"

using namespace gamowkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gamowkit_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig quick_config(Subcommand sub, const fs::path& out) {
  RunConfig c;
  c.subcommand = sub;
  c.out = out.string();
  if (sub == Subcommand::Transient) {
    c.model.kind = ModelKind::Barrier1DDelta;
    c.model.lambda = 2.0;
  }
  return c;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("canonical form round-trips byte for byte") {
    RunConfig c;
    c.subcommand = Subcommand::Propagate;
    c.model.lambda = 0.1 + 0.2;
    c.propagate.times = {0.1, 1.0 / 3.0, 5.0};
    c.transient.k0 = 1e-300;
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(serialize_config(parse_config(serialize_config(RunConfig{}))) == serialize_config(RunConfig{}));
  }

  TEST_CASE("minimal file gives defaults") {
    std::vector<std::string> keys;
    const RunConfig c = parse_config("subcommand = poles\n[model]\nkind = delta_shell\n", &keys);
    CHECK(c == RunConfig{});
    CHECK(keys == std::vector<std::string>{"subcommand", "model.kind"});
    CHECK(parse_config("  # comment only\n\n") == RunConfig{});
  }

  TEST_CASE("strict parsing") {
    try {
      parse_config("[model]\nlamda = 3\n");
      FAIL("expected ConfigParse");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigParse);
      CHECK(std::string(e.what()).find("lamda") != std::string::npos);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_ERROR_KIND(parse_config("[nosuch]\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[model]\nlambda = 1\nlambda = 2\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[model]\nlambda = ten\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[model]\nlambda\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[propagate]\nrepresentation = exact\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[model]\nkind = harmonic\n"), ErrorKind::ConfigParse);
    CHECK_ERROR_KIND(parse_config("[gamow\n"), ErrorKind::ConfigParse);
  }

  TEST_CASE("poles of the free shell: header only") {
    const fs::path out = scratch("free_poles");
    RunConfig c = quick_config(Subcommand::Poles, out);
    c.model.lambda = 0.0;
    const auto paths = run(c);
    REQUIRE(!paths.empty());
    CHECK(slurp(paths.front()) == "re_k,im_k,class,proper,residual\n");
    fs::remove_all(out);
  }

  TEST_CASE("propagate outside the interaction region") {
    RunConfig c = quick_config(Subcommand::Propagate, scratch("outside"));
    c.propagate.r = 1.0;
    CHECK_ERROR_KIND(run(c), ErrorKind::OutsideInteractionRegion);
    c.propagate.r = 1.5;
    CHECK_ERROR_KIND(run(c), ErrorKind::OutsideInteractionRegion);
    fs::remove_all(c.out);
  }

  TEST_CASE("csv schemas match the golden headers") {
    std::map<std::string, std::string> golden;
    std::ifstream in(std::string(GAMOWKIT_TEST_DATA) + "/golden/csv_headers.txt");
    REQUIRE(in);
    std::string file, header;
    while (in >> file >> header) golden[file] = header;
    REQUIRE(golden.size() == 9);

    std::set<std::string> seen;
    for (Subcommand sub : {Subcommand::Poles, Subcommand::Gamow, Subcommand::SumRules, Subcommand::Propagate,
                           Subcommand::Transient, Subcommand::Berggren, Subcommand::Effective,
                           Subcommand::Report}) {
      const fs::path out = scratch("schema_" + std::string(to_string(sub)));
      for (const auto& path : run(quick_config(sub, out))) {
        std::string name = fs::path(path).filename().string();
        if (fs::path(name).extension() != ".csv") continue;
        if (name.rfind("gamow_", 0) == 0 && name != "gamow_summary.csv") name = "gamow_N.csv";
        CAPTURE(name);
        REQUIRE(golden.count(name) == 1);
        CHECK(first_line(slurp(path)) == golden[name]);
        seen.insert(name);
      }
      fs::remove_all(out);
    }
    CHECK(seen.size() == golden.size());
  }

  TEST_CASE("identical configs give identical bytes") {
    for (Subcommand sub : {Subcommand::Poles, Subcommand::Berggren, Subcommand::Transient}) {
      RunConfig a = quick_config(sub, scratch("det_a"));
      a.berggren.random_pairs = 3;
      RunConfig b = a;
      b.out = scratch("det_b").string();
      b.threads = 3;
      const auto pa = run(a);
      const auto pb = run(b);
      REQUIRE(pa.size() == pb.size());
      for (std::size_t i = 0; i < pa.size(); ++i) CHECK(slurp(pa[i]) == slurp(pb[i]));
      fs::remove_all(a.out);
      fs::remove_all(b.out);
    }
  }

  TEST_CASE("thread count precedence") {
    ::unsetenv("GAMOWKIT_THREADS");
    CHECK(effective_threads(-1, 5) == 5);
    CHECK(effective_threads(2, 5) == 2);
    ::setenv("GAMOWKIT_THREADS", "7", 1);
    CHECK(effective_threads(-1, 5) == 7);
    CHECK(effective_threads(0, 5) == 0);
    ::setenv("GAMOWKIT_THREADS", "many", 1);
    CHECK_ERROR_KIND(effective_threads(-1, 5), ErrorKind::ConfigParse);
    ::unsetenv("GAMOWKIT_THREADS");
  }
}
