#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gamowkit/cli.hpp"
#include "gamowkit/error.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gamowkit::Error(gamowkit::ErrorKind::ConfigParse, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance poles, Gamow states and resonance expansions of finite-range potentials"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  int threads = -1;
  bool print_config = false;
  for (const char* name :
       {"poles", "gamow", "sumrules", "propagate", "transient", "berggren", "effective", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config's out)");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    sub->add_flag("--print-config", print_config, "print the canonical configuration and exit");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    std::vector<std::string> keys;
    gamowkit::RunConfig config = gamowkit::parse_config(read_file(config_path), &keys);
    const auto sub = gamowkit::parse_subcommand(chosen);
    if (std::find(keys.begin(), keys.end(), "subcommand") != keys.end() && config.subcommand != sub) {
      throw gamowkit::Error(gamowkit::ErrorKind::ConfigParse,
                            "config is for '" + std::string(gamowkit::to_string(config.subcommand)) +
                                "', not '" + chosen + "'");
    }
    config.subcommand = sub;
    if (!out_dir.empty()) config.out = out_dir;
    config.threads = gamowkit::effective_threads(threads, config.threads);
    if (print_config) {
      std::cout << gamowkit::serialize_config(config);
      return 0;
    }
    for (const auto& path : gamowkit::run(config)) std::cout << path << "\n";
  } catch (const gamowkit::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
