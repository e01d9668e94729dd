#pragma once

// Metropolis simulated-annealing chain on [0,1]^d driven by sequence points:
// propose through the kernel's inverse Rosenblatt map, accept with
// probability min(1, exp((phi(y) - phi(x)) / T_n)) using the driver's extra
// coordinate (weak inequality: ties accept), and track the running maximum.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsr/cooling.hpp"
#include "tsr/kernels.hpp"
#include "tsr/objectives.hpp"
#include "tsr/sequences.hpp"

namespace tsr {

// min(1, exp((phi_y - phi_x) / temperature)); throws on non-finite inputs.
double accept_prob(double phi_y, double phi_x, double temperature);

struct ChainState {
  std::uint64_t n = 0;  // completed steps
  std::vector<double> x;
  double value = 0.0;  // phi(x), cached
  std::vector<double> best_x;
  double best_value = 0.0;  // max of phi over the visited states
  std::uint64_t accept_count = 0;
};

struct StepRecord {
  std::uint64_t n = 0;  // step index (1-based)
  std::vector<double> proposal;
  double accept_u = 0.0;
  double accept_probability = 1.0;
  bool accepted = false;
  double temperature = 0.0;
  std::uint64_t kernel_index = 0;  // effective adaptation index at this step
  double sigma_eff = 0.0;          // smallest coordinate scale at this step
  double value = 0.0;              // phi of the state after the step
  double best_value = 0.0;
};

struct ChainTrace {
  ChainState initial;
  std::vector<StepRecord> records;
  ChainState final_state;
  std::vector<std::string> warnings;
};

ChainState make_initial_state(const Objective& objective,
                              std::vector<double> x0);

// One transition at step index state.n + 1. Evaluates the objective once (on
// the proposal; the current value is cached in the state).
ChainState step(const ChainState& state, const DriverPoint& u,
                const KernelSpec& kernel, const CoolingSchedule& cooling,
                const Objective& objective, StepRecord* record = nullptr);

struct RunOptions {
  // Consult the convergence-hypothesis checkers before running; failed
  // hypotheses become warnings, never errors.
  bool consult_checkers = true;
  std::uint64_t checker_horizon = 100000;
  // Keep every StepRecord in the trace (off for long runs; use on_step).
  bool keep_records = true;
  std::function<void(const StepRecord&)> on_step;
};

// The warnings run() would record before stepping: failed hypothesis checks
// for the driver's randomization regime, plus advisory notes.
std::vector<std::string> hypothesis_warnings(const SequenceDriver& driver,
                                             const KernelSpec& kernel,
                                             const CoolingSchedule& cooling,
                                             std::uint64_t iterations,
                                             const RunOptions& options = {});

ChainTrace run(std::vector<double> x0, std::uint64_t iterations,
               SequenceDriver& driver, const KernelSpec& kernel,
               const CoolingSchedule& cooling, const Objective& objective,
               const RunOptions& options = {});

}  // namespace tsr
