#include "fastosc/scenarios.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

int report(const char* kind, const std::string& message, int code) {
  std::cerr << "error\t" << kind << '\t' << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment runner for fast-oscillating potentials"};
  app.set_version_flag("--version", std::string(fastosc::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV tables plus summary.json");
  run->add_option("config,--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output_dir in the config)");
  run->add_option("--threads", threads, "Worker threads for independent sub-cases (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--quiet", quiet, "Do not print the written files");

  auto* list = app.add_subcommand("list-scenarios", "List the available scenarios");

  auto* check = app.add_subcommand("validate", "Check a config without running it");
  check->add_option("config,--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 64;
  }

  try {
    if (*list) {
      for (const auto& s : fastosc::scenario_catalog()) std::cout << s.name << '\t' << s.description << '\n';
      return 0;
    }
    const fastosc::ScenarioConfig config = fastosc::load_config(config_path);
    fastosc::validate(config);
    if (*check) {
      std::cout << "ok\t" << config.scenario << '\n';
      return 0;
    }
    const std::filesystem::path dir =
        !out_dir.empty() ? out_dir : (!config.output_dir.empty() ? config.output_dir : "out/" + config.scenario);
    const auto bundle = fastosc::run(config, {threads});
    const auto written = fastosc::emit(bundle, dir);
    if (!quiet)
      for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const fastosc::ConfigError& e) {
    return report("config", e.what(), 2);
  } catch (const std::exception& e) {
    return report("runtime", e.what(), 3);
  }
}
