#pragma once

// Time-varying Markov proposal kernels on [0,1]^d: truncated Student-t
// (Cauchy at nu = 1, Gaussian at nu = inf) and the ASA
// (adaptive-simulated-annealing) family, with per-coordinate scale
// schedules, block-wise adaptation, inverse-Rosenblatt sampling, and the
// explicit density floor / cap / Lipschitz constants used by the
// convergence-hypothesis checkers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsr/sequences.hpp"

namespace tsr {

// Degrees of freedom of the Student-t family; infinite() is the Gaussian
// limit.
class Dof {
 public:
  static Dof finite(int nu);
  static Dof infinite();
  static Dof parse(const std::string& text);  // integer or "inf"

  bool is_infinite() const { return nu_ < 0; }
  int value() const;  // throws std::logic_error when infinite
  std::string str() const;

  friend bool operator==(const Dof& a, const Dof& b) { return a.nu_ == b.nu_; }

 private:
  explicit Dof(int nu) : nu_(nu) {}
  int nu_;  // -1 encodes infinity
};

// ---------------------------------------------------------------------------
// Scale schedules sigma_n (non-increasing, clamped below at kSigmaFloor).

class ScaleSchedule {
 public:
  enum class Family { power, power_log, exp_power, custom };
  static constexpr double kSigmaFloor = 1e-12;

  // sigma0 * n^-beta
  static ScaleSchedule power(double sigma0, double beta);
  // sigma0 * n^-beta * log(n + e)^gamma  (must be non-increasing)
  static ScaleSchedule power_log(double sigma0, double beta, double gamma);
  // sigma0 * exp(-rate * n^(1/dim))
  static ScaleSchedule exp_power(double sigma0, double rate, int dim);
  // Arbitrary positive rule; condition checkers can only sample it.
  static ScaleSchedule custom(std::function<double(std::uint64_t)> fn);

  double at(std::uint64_t n) const;

  Family family() const { return family_; }
  double sigma0() const { return sigma0_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double rate() const { return rate_; }
  int dim() const { return dim_; }

 private:
  ScaleSchedule() = default;
  double raw_at(std::uint64_t n) const;
  Family family_ = Family::power;
  double sigma0_ = 1.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  double rate_ = 0.0;
  int dim_ = 1;
  std::function<double(std::uint64_t)> fn_;
};

double sigma_at(const ScaleSchedule& schedule, std::uint64_t n);

// ---------------------------------------------------------------------------
// Adaptation rule: when may the kernel (its scales) change.

struct Adaptation {
  enum class Mode { every_step, blocks };

  // Kernel parameters may change at every step.
  static Adaptation every_step();
  // Kernel parameters are frozen within blocks delimited by the adaptation
  // boundaries for (base, dim, level, quality); requires finite level.
  static Adaptation blocks(int base, int dim, Randomness level, int quality);

  Mode mode = Mode::every_step;
  int base = 2;
  int dim = 1;
  Randomness level = Randomness::finite(0);
  int quality = 0;
};

// Index at which schedules are evaluated at step n: n itself in every-step
// mode, otherwise the right endpoint of the block containing n (the smallest
// adaptation boundary >= n).
std::uint64_t effective_index(std::uint64_t n, const Adaptation& adaptation);

// ---------------------------------------------------------------------------
// Per-coordinate proposal families, truncated to [0,1].

double student_density(double y, double x, Dof nu, double sigma);
double student_cdf(double y, double x, Dof nu, double sigma);
// Closed forms at nu = 1 (arctan) and nu = inf (normal quantile); bracketed
// bisection against the numeric CDF otherwise (|F - u| <= 1e-12, <= 200
// iterations). u = 0 and u = 1 map to the truncation boundaries.
double student_inv_cdf(double x, Dof nu, double sigma, double u);

double asa_density(double y, double x, double sigma);
double asa_cdf(double y, double x, double sigma);
double asa_inv_cdf(double x, double sigma, double u);

// ---------------------------------------------------------------------------
// Kernel specification: family + per-coordinate schedules + adaptation.

enum class KernelFamily { student_t, asa };

class KernelSpec {
 public:
  static KernelSpec student(int dim, Dof nu, std::vector<ScaleSchedule> scales,
                            Adaptation adaptation);
  static KernelSpec student(int dim, Dof nu, const ScaleSchedule& scale,
                            Adaptation adaptation);
  static KernelSpec asa(int dim, std::vector<ScaleSchedule> scales,
                        Adaptation adaptation);
  static KernelSpec asa(int dim, const ScaleSchedule& scale,
                        Adaptation adaptation);

  KernelFamily family() const { return family_; }
  int dim() const { return dim_; }
  Dof nu() const { return nu_; }
  const ScaleSchedule& scale(int coordinate) const;
  const Adaptation& adaptation() const { return adaptation_; }

  // Scale of coordinate i at the effective index of step n.
  double sigma(std::uint64_t n, int coordinate) const;
  // Smallest coordinate scale at the effective index of step n.
  double sigma_min(std::uint64_t n) const;

  // Uniform lower bound on the truncation mass (Student) or base-kernel mass
  // (ASA) over all states and steps; computed once by adaptive quadrature.
  double floor_mass() const { return floor_mass_; }

 private:
  KernelSpec(KernelFamily f, int dim, Dof nu, std::vector<ScaleSchedule> s,
             Adaptation a);
  KernelFamily family_;
  int dim_;
  Dof nu_;
  std::vector<ScaleSchedule> scales_;
  Adaptation adaptation_;
  double floor_mass_ = 1.0;
};

// Proposal y from state x and uniforms u (one per coordinate), all per the
// kernel at step n (product form: coordinate-wise inverse CDFs).
std::vector<double> inv_rosenblatt(const KernelSpec& kernel, std::uint64_t n,
                                   const std::vector<double>& x,
                                   const std::vector<double>& u);
// Coordinate-wise CDF images (the inverse map of inv_rosenblatt).
std::vector<double> rosenblatt(const KernelSpec& kernel, std::uint64_t n,
                               const std::vector<double>& x,
                               const std::vector<double>& y);
// Transition density of the proposal kernel at step n.
double density(const KernelSpec& kernel, std::uint64_t n,
               const std::vector<double>& x, const std::vector<double>& y);

// Uniform lower bound on every per-coordinate proposal density at step n
// (evaluated at the smallest coordinate scale).
double density_floor(const KernelSpec& kernel, std::uint64_t n);
// Uniform upper bound on per-coordinate proposal densities at displacement
// >= delta0.
double peak_density_cap(const KernelSpec& kernel, std::uint64_t n,
                        double delta0);
// Lipschitz constant C_n with |F_n(x,y) - F_n(x',y')|_inf <= C_n * delta for
// delta-close arguments. Available for the Cauchy (nu = 1) and ASA families.
double cdf_lipschitz_bound(const KernelSpec& kernel, std::uint64_t n);

}  // namespace tsr
