#include "tsr/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsr/checks.hpp"

namespace tsr {

double accept_prob(double phi_y, double phi_x, double temperature) {
  if (!std::isfinite(phi_y) || !std::isfinite(phi_x)) {
    throw std::invalid_argument("objective values must be finite");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  if (phi_y >= phi_x) return 1.0;
  return std::exp((phi_y - phi_x) / temperature);
}

ChainState make_initial_state(const Objective& objective,
                              std::vector<double> x0) {
  ChainState s;
  s.value = objective.eval(x0);
  s.x = std::move(x0);
  s.best_x = s.x;
  s.best_value = s.value;
  return s;
}

ChainState step(const ChainState& state, const DriverPoint& u,
                const KernelSpec& kernel, const CoolingSchedule& cooling,
                const Objective& objective, StepRecord* record) {
  const std::uint64_t n = state.n + 1;
  std::vector<double> y = inv_rosenblatt(kernel, n, state.x, u.proposal);
  const double phi_y = objective.eval(y);
  const double temperature = cooling.at(n);
  const double a = accept_prob(phi_y, state.value, temperature);
  const bool accepted = u.accept <= a;

  ChainState next;
  next.n = n;
  next.accept_count = state.accept_count + (accepted ? 1 : 0);
  if (accepted) {
    next.x = y;
    next.value = phi_y;
  } else {
    next.x = state.x;
    next.value = state.value;
  }
  // The running maximum is over visited states, so rejected proposals never
  // enter it.
  if (next.value > state.best_value) {
    next.best_x = next.x;
    next.best_value = next.value;
  } else {
    next.best_x = state.best_x;
    next.best_value = state.best_value;
  }

  if (record != nullptr) {
    record->n = n;
    record->proposal = std::move(y);
    record->accept_u = u.accept;
    record->accept_probability = a;
    record->accepted = accepted;
    record->temperature = temperature;
    record->kernel_index = effective_index(n, kernel.adaptation());
    record->sigma_eff = kernel.sigma_min(n);
    record->value = next.value;
    record->best_value = next.best_value;
  }
  return next;
}

std::vector<std::string> hypothesis_warnings(const SequenceDriver& driver,
                                             const KernelSpec& kernel,
                                             const CoolingSchedule& cooling,
                                             std::uint64_t iterations,
                                             const RunOptions& options) {
  std::vector<std::string> warnings;
  const Randomness level = driver.config().level;
  if (level.is_infinite() && kernel.dim() > 1) {
    warnings.push_back(
        "deterministic (no-noise) driver guarantees are stated for dimension "
        "1; running with dimension " +
        std::to_string(kernel.dim()));
  }
  if (!options.consult_checkers) return warnings;
  CheckMode mode = CheckMode::finite_randomness;
  if (level.is_infinite()) {
    mode = CheckMode::deterministic;
  } else if (level.value() == 0) {
    mode = CheckMode::monte_carlo;
  }
  const std::uint64_t horizon =
      std::max<std::uint64_t>(10, std::min(iterations, options.checker_horizon));
  const ConditionReport report =
      check_conditions(kernel, cooling, mode, horizon);
  for (const auto& e : report.entries) {
    if (e.verdict == Verdict::fail) {
      warnings.push_back("hypothesis " + to_string(e.id) + " fails: " + e.note);
    }
  }
  for (const auto& note : report.notes) warnings.push_back(note);
  return warnings;
}

ChainTrace run(std::vector<double> x0, std::uint64_t iterations,
               SequenceDriver& driver, const KernelSpec& kernel,
               const CoolingSchedule& cooling, const Objective& objective,
               const RunOptions& options) {
  if (kernel.dim() != objective.dim() ||
      kernel.dim() != driver.config().dim) {
    throw std::invalid_argument(
        "driver, kernel, and objective dimensions must agree");
  }
  ChainTrace trace;
  trace.initial = make_initial_state(objective, std::move(x0));
  trace.warnings =
      hypothesis_warnings(driver, kernel, cooling, iterations, options);

  ChainState state = trace.initial;
  StepRecord record;
  if (options.keep_records) trace.records.reserve(iterations);
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const DriverPoint u = driver.next();
    state = step(state, u, kernel, cooling, objective, &record);
    if (options.on_step) options.on_step(record);
    if (options.keep_records) trace.records.push_back(record);
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace tsr
