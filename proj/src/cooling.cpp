#include "tsr/cooling.hpp"

#include <cmath>
#include <stdexcept>

namespace tsr {

CoolingSchedule CoolingSchedule::power(double T0, double a) {
  if (!(T0 > 0.0) || !std::isfinite(T0) || !std::isfinite(a)) {
    throw std::invalid_argument("power cooling needs finite T0 > 0 and a");
  }
  return CoolingSchedule(Family::power, T0, a);
}

CoolingSchedule CoolingSchedule::power_log(double T0, double c) {
  if (!(T0 > 0.0) || !std::isfinite(T0) || !std::isfinite(c)) {
    throw std::invalid_argument("power-log cooling needs finite T0 > 0 and c");
  }
  return CoolingSchedule(Family::power_log, T0, c);
}

double CoolingSchedule::at(std::uint64_t n) const {
  if (n < 1) throw std::invalid_argument("temperatures are defined for n >= 1");
  const double nd = static_cast<double>(n);
  switch (family_) {
    case Family::power:
      return T0_ * std::pow(nd, -exponent_);
    case Family::power_log:
      return T0_ / nd * std::pow(std::log(nd + std::exp(1.0)), -exponent_);
  }
  return 0.0;
}

double temperature_at(const CoolingSchedule& schedule, std::uint64_t n) {
  return schedule.at(n);
}

bool check_cooling(const CoolingSchedule& schedule) {
  switch (schedule.family()) {
    case CoolingSchedule::Family::power:
      return schedule.exponent() > 1.0;
    case CoolingSchedule::Family::power_log:
      return schedule.exponent() > 2.0;
  }
  return false;
}

}  // namespace tsr
