#pragma once

// Cooling (temperature) schedules for the annealer. Validity here always
// means summability of T_n * log(n), the condition the convergence
// guarantees require of the temperature sequence.

#include <cstdint>

namespace tsr {

class CoolingSchedule {
 public:
  enum class Family { power, power_log };

  // T_n = T0 * n^-a
  static CoolingSchedule power(double T0, double a);
  // T_n = T0 * n^-1 * log(n + e)^-c
  static CoolingSchedule power_log(double T0, double c);

  Family family() const { return family_; }
  double T0() const { return T0_; }
  double exponent() const { return exponent_; }
  double at(std::uint64_t n) const;

 private:
  CoolingSchedule(Family f, double T0, double e)
      : family_(f), T0_(T0), exponent_(e) {}
  Family family_;
  double T0_;
  double exponent_;
};

double temperature_at(const CoolingSchedule& schedule, std::uint64_t n);

// True iff sum_n T_n log n is finite: power needs a > 1, power-log needs
// c > 2.
bool check_cooling(const CoolingSchedule& schedule);

}  // namespace tsr
