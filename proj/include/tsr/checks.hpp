#pragma once

// Machine-checkable convergence hypotheses. For the closed schedule
// families the verdicts are derived analytically (exponent algebra on
// n^p log^q classes); numeric witness values at log-spaced indices are
// attached as evidence. Custom schedules yield 'undecidable' with sampled
// evidence only.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsr/cooling.hpp"
#include "tsr/kernels.hpp"

namespace tsr {

// Which guarantee regime to check hypotheses for:
//   monte_carlo       - fully randomized driver (R = 0)
//   finite_randomness - finite digit level R >= 0 with block adaptation
//   deterministic     - R = inf (stated for dimension 1)
enum class CheckMode { monte_carlo, finite_randomness, deterministic };

enum class ConditionId {
  kernel_floor_positive,  // density floor > 0 at every step
  kernel_floor_series,    // sum_n floor(n)^d diverges
  floor_rate_bounded,     // n^(-1/d) / floor(n) = O(1)
  floor_rate_vanishing,   // n^(-1/d) / floor(n) -> 0
  peak_rate_vanishing,    // n^(-1/d) / cap(n, delta0) -> 0
  family_scale_rate,      // family-specific sufficient scale rate = O(1)
  cooling_summable,       // sum_n T_n log n < inf
};

enum class Verdict { pass, fail, conjectured, undecidable, not_applicable };

std::string to_string(ConditionId id);
std::string to_string(Verdict v);
std::string to_string(CheckMode m);

struct ConditionEntry {
  ConditionId id = ConditionId::cooling_summable;
  Verdict verdict = Verdict::undecidable;
  std::string note;
  std::vector<std::pair<std::uint64_t, double>> witnesses;  // (n, value)
};

struct ConditionReport {
  CheckMode mode = CheckMode::monte_carlo;
  std::vector<ConditionEntry> entries;
  std::vector<std::string> notes;

  bool all_pass() const;  // no entry with verdict 'fail'
  const ConditionEntry* find(ConditionId id) const;
};

inline constexpr double kDefaultDelta0 = 0.2;

ConditionReport check_conditions(const KernelSpec& kernel,
                                 const CoolingSchedule& cooling,
                                 CheckMode mode, std::uint64_t horizon,
                                 double delta0 = kDefaultDelta0);

}  // namespace tsr
