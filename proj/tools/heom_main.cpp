#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heom/config.hpp"
#include "heom/oracles.hpp"
#include "heom/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

int cmd_run(const std::string& config_path, bool count_only, int threads,
            const std::string& out_dir) {
  heom::RunConfig config;
  try {
    config = heom::parse_config_file(config_path);
  } catch (const heom::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  try {
    heom::RunOptions opt;
    opt.count_only = count_only;
    opt.threads = threads;
    opt.out_dir = out_dir;
    heom::run(config, opt);
  } catch (const heom::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_describe(const std::string& config_path, const std::string& selector) {
  try {
    const heom::RunConfig config = heom::parse_config_file(config_path);
    std::cout << heom::describe_ado(config, selector) << "\n";
  } catch (const heom::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const heom::NotFoundError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_oracle(const std::string& name) {
  if (name == "list") {
    for (const auto& s : heom::oracles::suite_names()) std::cout << s << "\n";
    return 0;
  }
  try {
    const auto result = heom::oracles::run_suite(name);
    std::cout << result.name << ": " << (result.pass ? "PASS" : "FAIL") << " ("
              << result.detail << ")\n";
    return result.pass ? 0 : kExitSolver;
  } catch (const heom::NotFoundError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch HEOM engine for open quantum systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir, selector, oracle_name;
  bool count_only = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run the tasks of a configuration file");
  run->add_option("config", config_path, "JSON configuration")->required();
  run->add_flag("--count-only", count_only, "Print the ADO count and exit");
  run->add_option("--threads", threads, "Worker threads (overrides config)");
  run->add_option("--out", out_dir, "Output directory (overrides config)");

  auto* describe =
      app.add_subcommand("describe", "Print the dictionary entry of one ADO");
  describe->add_option("config", config_path, "JSON configuration")->required();
  describe
      ->add_option("index", selector,
                   "Flat index or JSON key {\"j\": [...], \"q\": [...]}")
      ->required();

  auto* oracle = app.add_subcommand("oracle", "Run a named oracle suite");
  oracle->add_option("name", oracle_name, "Suite name, or 'list'")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, count_only, threads, out_dir);
  if (describe->parsed()) return cmd_describe(config_path, selector);
  return cmd_oracle(oracle_name);
}
