#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsr/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"time-varying simulated annealing on digital sequences"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string suite;
  int workers = 0;
  std::uint64_t stride = 0;
  bool quiet = false;

  CLI::App* run_cmd =
      app.add_subcommand("run", "run an experiment from a JSON config");
  run_cmd->add_option("--config", config_path, "config file (JSON)")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides config)");
  run_cmd->add_option("--workers", workers,
                      "max concurrent replications (default: hardware)");
  run_cmd->add_option("--stride", stride,
                      "trace row stride (overrides config)");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", suite, "nets | kernels | conditions")
      ->required();
  verify_cmd->add_option("--config", config_path,
                         "config file (needed by the conditions suite)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      const tsr::ExperimentConfig config =
          tsr::ExperimentConfig::from_json_file(config_path);
      tsr::HarnessOptions options;
      options.workers = workers;
      options.quiet = quiet;
      if (!out_dir.empty()) options.out_override = out_dir;
      if (stride > 0) options.stride_override = stride;
      return tsr::run_experiment(config, options, std::cout);
    }
    std::optional<tsr::ExperimentConfig> config;
    if (!config_path.empty()) {
      config = tsr::ExperimentConfig::from_json_file(config_path);
    }
    return tsr::verify_suite(suite, config, std::cout);
  } catch (const tsr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
