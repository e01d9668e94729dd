#pragma once

// Benchmark objectives on [0,1]^d with known suprema and maximizers. Each is
// tagged by the smoothness regime it satisfies: continuity near the maximizer
// only, or global continuity with regular (finite-content) level sets.

#include <functional>
#include <string>
#include <vector>

namespace tsr {

enum class Smoothness { local_near_max, global_regular_levels };

std::string to_string(Smoothness s);

class Objective {
 public:
  Objective(std::string name, int dim, Smoothness smoothness, double max_value,
            std::vector<double> maximizer,
            std::function<double(const std::vector<double>&)> fn);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  Smoothness smoothness() const { return smoothness_; }
  // Known supremum (phi*) and one point attaining it.
  double max_value() const { return max_value_; }
  const std::vector<double>& maximizer() const { return maximizer_; }

  // Evaluate at x in [0,1]^d; throws std::domain_error off the domain and
  // std::logic_error if the value is non-finite or exceeds the supremum.
  double eval(const std::vector<double>& x) const;

 private:
  std::string name_;
  int dim_;
  Smoothness smoothness_;
  double max_value_;
  std::vector<double> maximizer_;
  std::function<double(const std::vector<double>&)> fn_;
};

// Registered names: "sphere", "multicos", "step_near_max".
Objective make_objective(const std::string& name, int dim);
std::vector<std::string> list_objectives();

}  // namespace tsr
