#include "tsr/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tsr {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> center(int dim) {
  return std::vector<double>(static_cast<std::size_t>(dim), 0.5);
}

double sphere_value(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += (c - 0.5) * (c - 0.5);
  return 0.0 - s;
}

double multicos_value(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) {
    const double z = c - 0.5;
    s += z * z - 0.1 * std::cos(6.0 * kPi * z) + 0.1;
  }
  return 0.0 - s;
}

double step_near_max_value(const std::vector<double>& x) {
  double dist = 0.0;
  for (double c : x) dist = std::max(dist, std::abs(c - 0.5));
  if (dist <= 0.1) return 0.0 - dist;
  double h = 0.0;
  const double f = 5.0 * x[0];
  if (f - std::floor(f) < 0.5) h += 0.25;
  long long parity = 0;
  for (double c : x) parity += static_cast<long long>(std::floor(3.0 * c));
  if (parity % 2 != 0) h += 0.15;
  return -0.2 - h;
}

}  // namespace

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::local_near_max: return "local_near_max";
    case Smoothness::global_regular_levels: return "global_regular_levels";
  }
  return "unknown";
}

Objective::Objective(std::string name, int dim, Smoothness smoothness,
                     double max_value, std::vector<double> maximizer,
                     std::function<double(const std::vector<double>&)> fn)
    : name_(std::move(name)),
      dim_(dim),
      smoothness_(smoothness),
      max_value_(max_value),
      maximizer_(std::move(maximizer)),
      fn_(std::move(fn)) {
  if (dim_ < 1) throw std::invalid_argument("objective dimension must be >= 1");
  if (static_cast<int>(maximizer_.size()) != dim_) {
    throw std::invalid_argument("maximizer size must equal the dimension");
  }
  if (!fn_) throw std::invalid_argument("objective needs an evaluator");
}

double Objective::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::domain_error("point size must equal the objective dimension");
  }
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::domain_error("point must lie in [0,1]^d");
    }
  }
  const double v = fn_(x);
  if (!std::isfinite(v) || v > max_value_ + 1e-12) {
    throw std::logic_error("objective value breaks its declared supremum");
  }
  return v;
}

Objective make_objective(const std::string& name, int dim) {
  if (name == "sphere") {
    return Objective("sphere", dim, Smoothness::global_regular_levels, 0.0,
                     center(dim), sphere_value);
  }
  if (name == "multicos") {
    return Objective("multicos", dim, Smoothness::global_regular_levels, 0.0,
                     center(dim), multicos_value);
  }
  if (name == "step_near_max") {
    return Objective("step_near_max", dim, Smoothness::local_near_max, 0.0,
                     center(dim), step_near_max_value);
  }
  throw std::invalid_argument("unknown objective: " + name);
}

std::vector<std::string> list_objectives() {
  return {"sphere", "multicos", "step_near_max"};
}

}  // namespace tsr
