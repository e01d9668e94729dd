#include "tsr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace tsr {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_unit(double v, const char* msg) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(msg);
}

void require_scale(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("scale must be positive and finite");
  }
}

// --- adaptive Simpson quadrature (used for the floor-mass constants) ------

double simpson_slice(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_slice(a, fa, m, fm, flm);
  const double right = simpson_slice(m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_slice(a, fa, b, fb, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// --- Student-t pieces ------------------------------------------------------

// Normalizing constant of the untruncated density, Gamma((nu+1)/2) /
// (Gamma(nu/2) sqrt(nu pi)).
double student_norm_const(double nu) {
  return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
         std::sqrt(nu * kPi);
}

// Untruncated location-scale density at y given center x.
double student_raw_density(double y, double x, Dof nu, double sigma) {
  const double z = (y - x) / sigma;
  if (nu.is_infinite()) {
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
  }
  const double v = static_cast<double>(nu.value());
  return student_norm_const(v) / sigma *
         std::pow(1.0 + z * z / v, -0.5 * (v + 1.0));
}

// Untruncated standard CDF.
double student_std_cdf(double z, Dof nu) {
  if (nu.is_infinite()) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
  }
  if (nu.value() == 1) {
    return 0.5 + std::atan(z) / kPi;
  }
  boost::math::students_t_distribution<double> dist(
      static_cast<double>(nu.value()));
  return boost::math::cdf(dist, z);
}

// Mass the untruncated law puts on [0,1] when centered at x.
double student_truncation_mass(double x, Dof nu, double sigma) {
  return student_std_cdf((1.0 - x) / sigma, nu) -
         student_std_cdf((0.0 - x) / sigma, nu);
}

// --- ASA pieces ------------------------------------------------------------

// Base (pre-truncation) CDF of the ASA kernel centered at x, evaluated at y
// in [x-1, x+1].
double asa_base_cdf(double x, double y, double sigma) {
  const double L = std::log1p(1.0 / sigma);
  const double d = y - x;
  const double s = (d > 0.0) - (d < 0.0);
  return 0.5 + 0.5 * s * std::log1p(std::abs(d) / sigma) / L;
}

// Base-kernel mass on [0,1].
double asa_truncation_mass(double x, double sigma) {
  const double L = std::log1p(1.0 / sigma);
  return (std::log1p((1.0 - x) / sigma) + std::log1p(x / sigma)) / (2.0 * L);
}

double asa_raw_density(double y, double x, double sigma) {
  const double L = std::log1p(1.0 / sigma);
  return 1.0 / (2.0 * (std::abs(y - x) + sigma) * L);
}

}  // namespace

// ---------------------------------------------------------------------------
// Dof

Dof Dof::finite(int nu) {
  if (nu < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  return Dof(nu);
}

Dof Dof::infinite() { return Dof(-1); }

Dof Dof::parse(const std::string& text) {
  if (text == "inf") return infinite();
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("degrees of freedom must be an integer or 'inf'");
  }
  if (pos != text.size() || v < 1) {
    throw std::invalid_argument("degrees of freedom must be >= 1 or 'inf'");
  }
  return finite(static_cast<int>(v));
}

int Dof::value() const {
  if (is_infinite()) throw std::logic_error("degrees of freedom are infinite");
  return nu_;
}

std::string Dof::str() const {
  return is_infinite() ? "inf" : std::to_string(nu_);
}

// ---------------------------------------------------------------------------
// ScaleSchedule

namespace {

void check_non_increasing(const ScaleSchedule& s) {
  double prev = s.at(1);
  auto probe = [&](std::uint64_t n) {
    const double cur = s.at(n);
    if (cur > prev * (1.0 + 1e-12)) {
      throw std::invalid_argument("scale schedule must be non-increasing");
    }
    prev = cur;
  };
  for (std::uint64_t n = 2; n <= 1024; ++n) probe(n);
  for (std::uint64_t n = 2048; n <= (std::uint64_t{1} << 40); n *= 2) probe(n);
}

}  // namespace

ScaleSchedule ScaleSchedule::power(double sigma0, double beta) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0) || !(beta >= 0.0)) {
    throw std::invalid_argument("power schedule needs sigma0 > 0 and beta >= 0");
  }
  ScaleSchedule s;
  s.family_ = Family::power;
  s.sigma0_ = sigma0;
  s.beta_ = beta;
  return s;
}

ScaleSchedule ScaleSchedule::power_log(double sigma0, double beta,
                                       double gamma) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0) || !(beta >= 0.0) ||
      !std::isfinite(gamma)) {
    throw std::invalid_argument(
        "power-log schedule needs sigma0 > 0, beta >= 0, finite gamma");
  }
  ScaleSchedule s;
  s.family_ = Family::power_log;
  s.sigma0_ = sigma0;
  s.beta_ = beta;
  s.gamma_ = gamma;
  check_non_increasing(s);
  return s;
}

ScaleSchedule ScaleSchedule::exp_power(double sigma0, double rate, int dim) {
  if (!(sigma0 > 0.0) || !(rate > 0.0) || dim < 1) {
    throw std::invalid_argument(
        "exp-power schedule needs sigma0 > 0, rate > 0, dim >= 1");
  }
  ScaleSchedule s;
  s.family_ = Family::exp_power;
  s.sigma0_ = sigma0;
  s.rate_ = rate;
  s.dim_ = dim;
  return s;
}

ScaleSchedule ScaleSchedule::custom(std::function<double(std::uint64_t)> fn) {
  if (!fn) throw std::invalid_argument("custom schedule needs a callable");
  ScaleSchedule s;
  s.family_ = Family::custom;
  s.fn_ = std::move(fn);
  return s;
}

double ScaleSchedule::raw_at(std::uint64_t n) const {
  const double nd = static_cast<double>(n);
  switch (family_) {
    case Family::power:
      return sigma0_ * std::pow(nd, -beta_);
    case Family::power_log:
      return sigma0_ * std::pow(nd, -beta_) *
             std::pow(std::log(nd + std::exp(1.0)), gamma_);
    case Family::exp_power:
      return sigma0_ * std::exp(-rate_ * std::pow(nd, 1.0 / dim_));
    case Family::custom: {
      const double v = fn_(n);
      if (!std::isfinite(v) || v <= 0.0) {
        throw std::runtime_error("custom scale schedule returned a non-positive value");
      }
      return v;
    }
  }
  return sigma0_;
}

double ScaleSchedule::at(std::uint64_t n) const {
  if (n < 1) throw std::invalid_argument("scales are defined for n >= 1");
  return std::max(raw_at(n), kSigmaFloor);
}

double sigma_at(const ScaleSchedule& schedule, std::uint64_t n) {
  return schedule.at(n);
}

// ---------------------------------------------------------------------------
// Adaptation

Adaptation Adaptation::every_step() { return Adaptation{}; }

Adaptation Adaptation::blocks(int base, int dim, Randomness level,
                              int quality) {
  require(base >= 2 && dim >= 1 && quality >= 0, "invalid adaptation block parameters");
  require(!level.is_infinite(),
          "block adaptation requires a finite randomization level");
  Adaptation a;
  a.mode = Mode::blocks;
  a.base = base;
  a.dim = dim;
  a.level = level;
  a.quality = quality;
  return a;
}

std::uint64_t effective_index(std::uint64_t n, const Adaptation& adaptation) {
  require(n >= 1, "effective index is defined for n >= 1");
  if (adaptation.mode == Adaptation::Mode::every_step) return n;
  if (n == 1) return 1;
  // Smallest adaptation boundary >= n: boundaries are the base powers plus
  // the multiples of the block length b^(dR+t).
  unsigned __int128 p = static_cast<unsigned>(adaptation.base);
  while (p < static_cast<unsigned __int128>(n)) {
    p *= static_cast<unsigned>(adaptation.base);
  }
  const long long e = static_cast<long long>(adaptation.dim) *
                          adaptation.level.value() +
                      adaptation.quality;
  unsigned __int128 block = 1;
  bool huge = false;
  for (long long i = 0; i < e; ++i) {
    block *= static_cast<unsigned>(adaptation.base);
    if (block >= static_cast<unsigned __int128>(n)) {
      // First multiple >= n is the block length itself.
      huge = true;
      break;
    }
  }
  unsigned __int128 mult;
  if (huge) {
    mult = block;
  } else {
    const std::uint64_t b64 = static_cast<std::uint64_t>(block);
    mult = static_cast<unsigned __int128>((n + b64 - 1) / b64) * b64;
  }
  const unsigned __int128 ans = p < mult ? p : mult;
  return static_cast<std::uint64_t>(ans);
}

// ---------------------------------------------------------------------------
// Student-t family on [0,1]

double student_density(double y, double x, Dof nu, double sigma) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(y, "proposal coordinate must lie in [0,1]");
  require_scale(sigma);
  return student_raw_density(y, x, nu, sigma) /
         student_truncation_mass(x, nu, sigma);
}

double student_cdf(double y, double x, Dof nu, double sigma) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(y, "proposal coordinate must lie in [0,1]");
  require_scale(sigma);
  const double lo = student_std_cdf((0.0 - x) / sigma, nu);
  return (student_std_cdf((y - x) / sigma, nu) - lo) /
         student_truncation_mass(x, nu, sigma);
}

double student_inv_cdf(double x, Dof nu, double sigma, double u) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(u, "uniform must lie in [0,1]");
  require_scale(sigma);
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  if (!nu.is_infinite() && nu.value() == 1) {
    const double lo = std::atan(-x / sigma);
    const double hi = std::atan((1.0 - x) / sigma);
    const double y = x + sigma * std::tan(lo + u * (hi - lo));
    return std::clamp(y, 0.0, 1.0);
  }
  if (nu.is_infinite()) {
    boost::math::normal_distribution<double> normal;
    const double plo = boost::math::cdf(normal, (0.0 - x) / sigma);
    const double phi = boost::math::cdf(normal, (1.0 - x) / sigma);
    const double p = plo + u * (phi - plo);
    const double y = x + sigma * boost::math::quantile(normal, p);
    return std::clamp(y, 0.0, 1.0);
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double F = student_cdf(mid, x, nu, sigma);
    if (std::abs(F - u) <= 1e-12) return mid;
    if (F < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// ASA family on [0,1]

double asa_density(double y, double x, double sigma) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(y, "proposal coordinate must lie in [0,1]");
  require_scale(sigma);
  return asa_raw_density(y, x, sigma) / asa_truncation_mass(x, sigma);
}

double asa_cdf(double y, double x, double sigma) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(y, "proposal coordinate must lie in [0,1]");
  require_scale(sigma);
  return (asa_base_cdf(x, y, sigma) - asa_base_cdf(x, 0.0, sigma)) /
         asa_truncation_mass(x, sigma);
}

double asa_inv_cdf(double x, double sigma, double u) {
  require_unit(x, "state coordinate must lie in [0,1]");
  require_unit(u, "uniform must lie in [0,1]");
  require_scale(sigma);
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  const double L = std::log1p(1.0 / sigma);
  const double v = asa_base_cdf(x, 0.0, sigma) + u * asa_truncation_mass(x, sigma);
  const double w = 2.0 * v - 1.0;
  const double s = (w > 0.0) - (w < 0.0);
  const double g = s * sigma * std::expm1(std::abs(w) * L);
  return std::clamp(x + g, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// KernelSpec

KernelSpec::KernelSpec(KernelFamily f, int dim, Dof nu,
                       std::vector<ScaleSchedule> s, Adaptation a)
    : family_(f), dim_(dim), nu_(nu), scales_(std::move(s)), adaptation_(a) {
  require(dim_ >= 1, "kernel dimension must be >= 1");
  require(static_cast<int>(scales_.size()) == dim_,
          "need one scale schedule per coordinate");
  if (adaptation_.mode == Adaptation::Mode::blocks) {
    require(adaptation_.dim == dim_,
            "block adaptation dimension must match the kernel dimension");
  }
  // Largest first-step scale across coordinates gives the least concentrated
  // kernel; its truncation mass lower-bounds every later one.
  double sigma1 = 0.0;
  for (const auto& sched : scales_) sigma1 = std::max(sigma1, sched.at(1));
  double lo = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= 10; ++g) {
    const double x = static_cast<double>(g) / 10.0;
    auto integrand = [&](double y) {
      return family_ == KernelFamily::student_t
                 ? student_raw_density(y, x, nu_, sigma1)
                 : asa_raw_density(y, x, sigma1);
    };
    const double mass = adaptive_simpson(integrand, 0.0, x, 1e-10) +
                        adaptive_simpson(integrand, x, 1.0, 1e-10);
    lo = std::min(lo, mass);
  }
  floor_mass_ = lo;
}

KernelSpec KernelSpec::student(int dim, Dof nu, std::vector<ScaleSchedule> s,
                               Adaptation a) {
  return KernelSpec(KernelFamily::student_t, dim, nu, std::move(s), a);
}

KernelSpec KernelSpec::student(int dim, Dof nu, const ScaleSchedule& scale,
                               Adaptation a) {
  return KernelSpec(KernelFamily::student_t, dim, nu,
                    std::vector<ScaleSchedule>(dim, scale), a);
}

KernelSpec KernelSpec::asa(int dim, std::vector<ScaleSchedule> s,
                           Adaptation a) {
  return KernelSpec(KernelFamily::asa, dim, Dof::finite(1), std::move(s), a);
}

KernelSpec KernelSpec::asa(int dim, const ScaleSchedule& scale, Adaptation a) {
  return KernelSpec(KernelFamily::asa, dim,  Dof::finite(1),
                    std::vector<ScaleSchedule>(dim, scale), a);
}

const ScaleSchedule& KernelSpec::scale(int coordinate) const {
  require(coordinate >= 0 && coordinate < dim_, "coordinate out of range");
  return scales_[coordinate];
}

double KernelSpec::sigma(std::uint64_t n, int coordinate) const {
  return scale(coordinate).at(effective_index(n, adaptation_));
}

double KernelSpec::sigma_min(std::uint64_t n) const {
  const std::uint64_t m = effective_index(n, adaptation_);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& sched : scales_) lo = std::min(lo, sched.at(m));
  return lo;
}

// ---------------------------------------------------------------------------
// Kernel-level maps

namespace {

void require_state(const KernelSpec& kernel, const std::vector<double>& x,
                   const char* what) {
  require(static_cast<int>(x.size()) == kernel.dim(),
          "vector size must equal the kernel dimension");
  for (double c : x) require_unit(c, what);
}

}  // namespace

std::vector<double> inv_rosenblatt(const KernelSpec& kernel, std::uint64_t n,
                                   const std::vector<double>& x,
                                   const std::vector<double>& u) {
  require_state(kernel, x, "state coordinate must lie in [0,1]");
  require(u.size() == x.size(), "need one uniform per coordinate");
  const std::uint64_t m = effective_index(n, kernel.adaptation());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require_unit(u[i], "uniform must lie in [0,1]");
    const double s = kernel.scale(static_cast<int>(i)).at(m);
    y[i] = kernel.family() == KernelFamily::student_t
               ? student_inv_cdf(x[i], kernel.nu(), s, u[i])
               : asa_inv_cdf(x[i], s, u[i]);
  }
  return y;
}

std::vector<double> rosenblatt(const KernelSpec& kernel, std::uint64_t n,
                               const std::vector<double>& x,
                               const std::vector<double>& y) {
  require_state(kernel, x, "state coordinate must lie in [0,1]");
  require_state(kernel, y, "proposal coordinate must lie in [0,1]");
  const std::uint64_t m = effective_index(n, kernel.adaptation());
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = kernel.scale(static_cast<int>(i)).at(m);
    u[i] = kernel.family() == KernelFamily::student_t
               ? student_cdf(y[i], x[i], kernel.nu(), s)
               : asa_cdf(y[i], x[i], s);
  }
  return u;
}

double density(const KernelSpec& kernel, std::uint64_t n,
               const std::vector<double>& x, const std::vector<double>& y) {
  require_state(kernel, x, "state coordinate must lie in [0,1]");
  require_state(kernel, y, "proposal coordinate must lie in [0,1]");
  const std::uint64_t m = effective_index(n, kernel.adaptation());
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = kernel.scale(static_cast<int>(i)).at(m);
    prod *= kernel.family() == KernelFamily::student_t
                ? student_density(y[i], x[i], kernel.nu(), s)
                : asa_density(y[i], x[i], s);
  }
  return prod;
}

double density_floor(const KernelSpec& kernel, std::uint64_t n) {
  const double s = kernel.sigma_min(n);
  if (kernel.family() == KernelFamily::asa) {
    return 1.0 / (2.0 * (1.0 + s) * std::log1p(1.0 / s));
  }
  if (kernel.nu().is_infinite()) {
    return std::exp(-0.5 / (s * s)) / (s * std::sqrt(2.0 * kPi));
  }
  const double v = static_cast<double>(kernel.nu().value());
  return student_norm_const(v) / s *
         std::pow(1.0 + 1.0 / (v * s * s), -0.5 * (v + 1.0));
}

double peak_density_cap(const KernelSpec& kernel, std::uint64_t n,
                        double delta0) {
  require(delta0 > 0.0 && delta0 <= 1.0, "delta0 must lie in (0,1]");
  const double s = kernel.sigma_min(n);
  const double mass = kernel.floor_mass();
  if (kernel.family() == KernelFamily::asa) {
    return 1.0 / (2.0 * (delta0 + s) * std::log1p(1.0 / s) * mass);
  }
  if (kernel.nu().is_infinite()) {
    return std::exp(-0.5 * delta0 * delta0 / (s * s)) /
           (mass * s * std::sqrt(2.0 * kPi));
  }
  const double v = static_cast<double>(kernel.nu().value());
  return student_norm_const(v) / (mass * s) *
         std::pow(1.0 + delta0 * delta0 / (v * s * s), -0.5 * (v + 1.0));
}

double cdf_lipschitz_bound(const KernelSpec& kernel, std::uint64_t n) {
  const double s = kernel.sigma_min(n);
  if (kernel.family() == KernelFamily::asa) {
    return 4.0 / (s * std::log1p(1.0 / s) * kernel.floor_mass());
  }
  require(!kernel.nu().is_infinite() && kernel.nu().value() == 1,
          "the CDF Lipschitz constant is available for nu = 1 only");
  return 8.0 / (kernel.floor_mass() * kPi * s);
}

}  // namespace tsr
