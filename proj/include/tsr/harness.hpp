#pragma once

// Experiment harness: flat JSON config -> concurrent replications -> one
// trace CSV per replication, an effective-config echo, and a key-value
// summary. Also hosts the verification suites behind the CLI.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsr/annealer.hpp"

namespace tsr {

// Unusable configuration (bad JSON, unknown key, invalid combination).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string objective = "sphere";
  int dim = 1;
  std::string kernel_family = "student";  // "student" | "asa"
  Dof nu = Dof::finite(1);                // Student only; integer or "inf"
  std::string sigma_family = "power";     // "power" | "power_log" | "exp_power"
  double sigma0 = 0.5;
  double sigma_beta = 0.5;
  double sigma_gamma = 0.0;
  double sigma_rate = 1.0;
  std::string adaptation;  // "every_step" | "blocks"; empty = by randomness
  Randomness level = Randomness::finite(0);  // R: integer or "inf"
  int base = 2;                              // b (the driver requires 2)
  int quality = -1;                          // t; -1 = digit-table default
  std::string cooling_family = "power";      // "power" | "power_log"
  double T0 = 1.0;
  double cooling_a = 2.0;
  double cooling_c = 3.0;
  std::uint64_t iterations = 1000;
  int replications = 1;
  std::uint64_t seed = 0;
  std::vector<double> x0;                  // empty = center of [0,1]^d
  std::vector<std::uint64_t> checkpoints;  // empty = {100, 1000, 10000, N}
  std::uint64_t stride = 1;
  std::string out = "out";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  // Echo with every default resolved, keys sorted; excludes the output path.
  std::string effective_json_text() const;

  std::string resolved_adaptation() const;
  int resolved_quality() const;
  std::vector<double> resolved_x0() const;
  std::vector<std::uint64_t> resolved_checkpoints() const;

  KernelSpec make_kernel() const;
  CoolingSchedule make_cooling() const;
  Objective make_objective_instance() const;
};

struct HarnessOptions {
  int workers = 0;  // <= 0 means hardware concurrency
  bool quiet = false;
  std::optional<std::string> out_override;
  std::optional<std::uint64_t> stride_override;
};

// Runs all replications (replication r uses seed + r), writing under the
// output directory: config_effective.json, trace_###.csv, summary.txt, and
// timing.txt. Returns 0 on success, 1 on runtime failure.
int run_experiment(const ExperimentConfig& config,
                   const HarnessOptions& options, std::ostream& log);

// Suites: "nets", "kernels", "conditions" (the last needs a config). Prints
// one PASS/FAIL line per check to `out`; returns 0 iff nothing failed.
int verify_suite(const std::string& suite,
                 const std::optional<ExperimentConfig>& config,
                 std::ostream& out);

}  // namespace tsr
