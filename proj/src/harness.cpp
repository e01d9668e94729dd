#include "tsr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <semaphore>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tsr/checks.hpp"

namespace tsr {

namespace {

using nlohmann::json;

// Locale-independent shortest-faithful float formatting at 17 significant
// digits, shared by the CSV, the summary, and the config echo.
std::string fmt(double v) {
  char buf[64];
  // Shortest representation that parses back to the same double.
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  return j;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "objective", "d",           "kernel",     "nu",        "sigma_family",
      "sigma0",    "sigma_beta",  "sigma_gamma", "sigma_rate", "adaptation",
      "R",         "b",           "t",          "cooling",   "T0",
      "cooling_a", "cooling_c",   "iterations", "replications", "seed",
      "x0",        "checkpoints", "stride",     "out"};
  return keys;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key +
                      "' has the wrong type");
  }
}

Randomness parse_level(const json& j, const char* key, Randomness fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  try {
    if (v.is_string()) return Randomness::parse(v.get<std::string>());
    if (v.is_number_integer()) {
      return Randomness::finite(v.get<int>());
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
  throw ConfigError(std::string("config key '") + key +
                    "' must be an integer or \"inf\"");
}

Dof parse_nu(const json& j, const char* key, Dof fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  try {
    if (v.is_string()) return Dof::parse(v.get<std::string>());
    if (v.is_number_integer()) return Dof::finite(v.get<int>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
  throw ConfigError(std::string("config key '") + key +
                    "' must be an integer or \"inf\"");
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.dim < 1) fail("d must be >= 1");
  if (c.dim > 10) fail("the built-in digit table covers dimensions 1..10");
  if (c.kernel_family != "student" && c.kernel_family != "asa") {
    fail("kernel must be \"student\" or \"asa\"");
  }
  if (c.sigma_family != "power" && c.sigma_family != "power_log" &&
      c.sigma_family != "exp_power") {
    fail("sigma_family must be \"power\", \"power_log\", or \"exp_power\"");
  }
  if (!c.adaptation.empty() && c.adaptation != "every_step" &&
      c.adaptation != "blocks") {
    fail("adaptation must be \"every_step\" or \"blocks\"");
  }
  if (c.adaptation == "blocks" && c.level.is_infinite()) {
    fail("block adaptation requires a finite randomization level R");
  }
  if (c.base != 2) fail("the sequence driver supports base b = 2 only");
  if (c.quality < -1) fail("t must be >= 0 (or omitted for the table default)");
  if (c.cooling_family != "power" && c.cooling_family != "power_log") {
    fail("cooling must be \"power\" or \"power_log\"");
  }
  if (c.replications < 1) fail("replications must be >= 1");
  if (c.stride < 1) fail("stride must be >= 1");
  if (!c.x0.empty()) {
    if (static_cast<int>(c.x0.size()) != c.dim) {
      fail("x0 must have exactly d coordinates");
    }
    for (double v : c.x0) {
      if (!(v >= 0.0 && v <= 1.0)) fail("x0 coordinates must lie in [0,1]");
    }
  }
  for (std::uint64_t n : c.checkpoints) {
    if (n < 1) fail("checkpoints must be >= 1");
  }
  const auto names = list_objectives();
  if (std::find(names.begin(), names.end(), c.objective) == names.end()) {
    fail("unknown objective: " + c.objective);
  }
  // Family parameter sanity, surfaced as config errors rather than deferred
  // construction failures.
  try {
    c.make_cooling();
    c.make_kernel();
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json j = parse_json(text);
  for (const auto& item : j.items()) {
    if (known_keys().find(item.key()) == known_keys().end()) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }
  ExperimentConfig c;
  c.objective = get_or<std::string>(j, "objective", c.objective);
  c.dim = get_or<int>(j, "d", c.dim);
  c.kernel_family = get_or<std::string>(j, "kernel", c.kernel_family);
  c.nu = parse_nu(j, "nu", c.nu);
  c.sigma_family = get_or<std::string>(j, "sigma_family", c.sigma_family);
  c.sigma0 = get_or<double>(j, "sigma0", c.sigma0);
  c.sigma_beta = get_or<double>(j, "sigma_beta", c.sigma_beta);
  c.sigma_gamma = get_or<double>(j, "sigma_gamma", c.sigma_gamma);
  c.sigma_rate = get_or<double>(j, "sigma_rate", c.sigma_rate);
  c.adaptation = get_or<std::string>(j, "adaptation", c.adaptation);
  c.level = parse_level(j, "R", c.level);
  c.base = get_or<int>(j, "b", c.base);
  c.quality = get_or<int>(j, "t", c.quality);
  c.cooling_family = get_or<std::string>(j, "cooling", c.cooling_family);
  c.T0 = get_or<double>(j, "T0", c.T0);
  c.cooling_a = get_or<double>(j, "cooling_a", c.cooling_a);
  c.cooling_c = get_or<double>(j, "cooling_c", c.cooling_c);
  c.iterations = get_or<std::uint64_t>(j, "iterations", c.iterations);
  c.replications = get_or<int>(j, "replications", c.replications);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.x0 = get_or<std::vector<double>>(j, "x0", c.x0);
  c.checkpoints =
      get_or<std::vector<std::uint64_t>>(j, "checkpoints", c.checkpoints);
  c.stride = get_or<std::uint64_t>(j, "stride", c.stride);
  c.out = get_or<std::string>(j, "out", c.out);
  validate(c);
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ExperimentConfig::resolved_adaptation() const {
  if (!adaptation.empty()) return adaptation;
  return level.is_infinite() ? "every_step" : "blocks";
}

int ExperimentConfig::resolved_quality() const {
  if (quality >= 0) return quality;
  return DigitTable::builtin(dim).declared_t(dim);
}

std::vector<double> ExperimentConfig::resolved_x0() const {
  if (!x0.empty()) return x0;
  return std::vector<double>(static_cast<std::size_t>(dim), 0.5);
}

std::vector<std::uint64_t> ExperimentConfig::resolved_checkpoints() const {
  std::vector<std::uint64_t> cp = checkpoints;
  if (cp.empty()) cp = {100, 1000, 10000, iterations};
  cp.push_back(iterations);
  std::sort(cp.begin(), cp.end());
  cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
  cp.erase(std::remove_if(cp.begin(), cp.end(),
                          [&](std::uint64_t n) {
                            return n < 1 || n > iterations;
                          }),
           cp.end());
  return cp;
}

std::string ExperimentConfig::effective_json_text() const {
  json j;
  j["objective"] = objective;
  j["d"] = dim;
  j["kernel"] = kernel_family;
  if (kernel_family == "student") {
    if (nu.is_infinite()) {
      j["nu"] = "inf";
    } else {
      j["nu"] = nu.value();
    }
  }
  j["sigma_family"] = sigma_family;
  j["sigma0"] = sigma0;
  if (sigma_family == "power" || sigma_family == "power_log") {
    j["sigma_beta"] = sigma_beta;
  }
  if (sigma_family == "power_log") j["sigma_gamma"] = sigma_gamma;
  if (sigma_family == "exp_power") j["sigma_rate"] = sigma_rate;
  j["adaptation"] = resolved_adaptation();
  if (level.is_infinite()) {
    j["R"] = "inf";
  } else {
    j["R"] = level.value();
  }
  j["b"] = base;
  j["t"] = resolved_quality();
  j["cooling"] = cooling_family;
  j["T0"] = T0;
  if (cooling_family == "power") {
    j["cooling_a"] = cooling_a;
  } else {
    j["cooling_c"] = cooling_c;
  }
  j["iterations"] = iterations;
  j["replications"] = replications;
  j["seed"] = seed;
  j["x0"] = resolved_x0();
  j["checkpoints"] = resolved_checkpoints();
  j["stride"] = stride;
  return j.dump(2) + "\n";
}

KernelSpec ExperimentConfig::make_kernel() const {
  ScaleSchedule sched = [&] {
    if (sigma_family == "power") return ScaleSchedule::power(sigma0, sigma_beta);
    if (sigma_family == "power_log") {
      return ScaleSchedule::power_log(sigma0, sigma_beta, sigma_gamma);
    }
    return ScaleSchedule::exp_power(sigma0, sigma_rate, dim);
  }();
  const Adaptation adapt =
      resolved_adaptation() == "blocks"
          ? Adaptation::blocks(base, dim, level, resolved_quality())
          : Adaptation::every_step();
  if (kernel_family == "asa") return KernelSpec::asa(dim, sched, adapt);
  return KernelSpec::student(dim, nu, sched, adapt);
}

CoolingSchedule ExperimentConfig::make_cooling() const {
  if (cooling_family == "power") return CoolingSchedule::power(T0, cooling_a);
  return CoolingSchedule::power_log(T0, cooling_c);
}

Objective ExperimentConfig::make_objective_instance() const {
  return make_objective(objective, dim);
}

// ---------------------------------------------------------------------------
// run_experiment

namespace {

struct RepResult {
  std::string csv;
  std::vector<double> checkpoint_best;  // aligned with resolved checkpoints
  double accept_rate = 0.0;
  std::vector<std::string> warnings;
};

void append_row(std::string& out, std::uint64_t n,
                const std::vector<double>& x, double value, double best,
                bool accepted, double a, double temperature, double sigma,
                std::uint64_t kernel_index) {
  out += std::to_string(n);
  for (double c : x) {
    out += ',';
    out += fmt(c);
  }
  out += ',';
  out += fmt(value);
  out += ',';
  out += fmt(best);
  out += ',';
  out += accepted ? '1' : '0';
  out += ',';
  out += fmt(a);
  out += ',';
  out += fmt(temperature);
  out += ',';
  out += fmt(sigma);
  out += ',';
  out += std::to_string(kernel_index);
  out += '\n';
}

RepResult run_replication(const ExperimentConfig& cfg, const DigitTable& table,
                          const Objective& objective, const KernelSpec& kernel,
                          const CoolingSchedule& cooling, int rep,
                          std::uint64_t stride) {
  DriverConfig dc;
  dc.base = cfg.base;
  dc.dim = cfg.dim;
  dc.quality = cfg.resolved_quality();
  dc.level = cfg.level;
  dc.seed = cfg.seed + static_cast<std::uint64_t>(rep);
  SequenceDriver driver(table, dc);

  const std::vector<std::uint64_t> checkpoints = cfg.resolved_checkpoints();
  RepResult result;
  result.checkpoint_best.assign(checkpoints.size(), 0.0);

  std::string& csv = result.csv;
  csv += "n";
  for (int i = 1; i <= cfg.dim; ++i) csv += ",x_" + std::to_string(i);
  csv += ",value,best_value,accepted,A_n,T_n,sigma_eff,kernel_index\n";

  const std::vector<double> x0 = cfg.resolved_x0();
  {
    // Initial row: ambient step-1 parameters, trivially accepted state.
    const double v0 = objective.eval(x0);
    append_row(csv, 0, x0, v0, v0, true, 1.0, cooling.at(1),
               kernel.sigma_min(1), effective_index(1, kernel.adaptation()));
  }

  // CSV rows carry the post-step state, which StepRecord does not, so the
  // chain is stepped manually here rather than through run().
  ChainState state = make_initial_state(objective, x0);
  result.warnings =
      hypothesis_warnings(driver, kernel, cooling, cfg.iterations);
  StepRecord record;
  std::size_t next_cp = 0;
  for (std::uint64_t i = 0; i < cfg.iterations; ++i) {
    const DriverPoint u = driver.next();
    state = step(state, u, kernel, cooling, objective, &record);
    const bool at_checkpoint = next_cp < checkpoints.size() &&
                               record.n == checkpoints[next_cp];
    if (at_checkpoint) {
      result.checkpoint_best[next_cp] = record.best_value;
      ++next_cp;
    }
    if (record.n % stride == 0 || at_checkpoint ||
        record.n == cfg.iterations) {
      append_row(csv, record.n, state.x, state.value, state.best_value,
                 record.accepted, record.accept_probability,
                 record.temperature, record.sigma_eff, record.kernel_index);
    }
  }
  result.accept_rate =
      cfg.iterations == 0
          ? 0.0
          : static_cast<double>(state.accept_count) /
                static_cast<double>(cfg.iterations);
  return result;
}

double nearest_rank(std::vector<double> sorted, double q) {
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

}  // namespace

int run_experiment(const ExperimentConfig& config,
                   const HarnessOptions& options, std::ostream& log) {
  namespace fs = std::filesystem;
  try {
    const std::string out_dir = options.out_override.value_or(config.out);
    const std::uint64_t stride =
        options.stride_override.value_or(config.stride);
    if (stride < 1) throw ConfigError("stride must be >= 1");
    fs::create_directories(out_dir);

    {
      std::ofstream f(fs::path(out_dir) / "config_effective.json",
                      std::ios::binary);
      f << config.effective_json_text();
    }

    const DigitTable table = DigitTable::builtin(config.dim);
    const Objective objective = config.make_objective_instance();
    const KernelSpec kernel = config.make_kernel();
    const CoolingSchedule cooling = config.make_cooling();
    const std::vector<std::uint64_t> checkpoints =
        config.resolved_checkpoints();

    const auto start = std::chrono::steady_clock::now();

    int workers = options.workers;
    if (workers <= 0) {
      workers = static_cast<int>(std::thread::hardware_concurrency());
      if (workers < 1) workers = 1;
    }
    std::counting_semaphore<> slots(workers);

    std::vector<std::future<RepResult>> futures;
    futures.reserve(static_cast<std::size_t>(config.replications));
    for (int r = 0; r < config.replications; ++r) {
      futures.push_back(std::async(std::launch::async, [&, r] {
        slots.acquire();
        struct Release {
          std::counting_semaphore<>* s;
          ~Release() { s->release(); }
        } release{&slots};
        return run_replication(config, table, objective, kernel, cooling, r,
                               stride);
      }));
    }

    std::vector<std::vector<double>> per_checkpoint(checkpoints.size());
    std::vector<double> accept_rates;
    accept_rates.reserve(futures.size());
    for (int r = 0; r < config.replications; ++r) {
      RepResult res = futures[static_cast<std::size_t>(r)].get();
      char name[32];
      std::snprintf(name, sizeof(name), "trace_%03d.csv", r);
      std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
      f << res.csv;
      for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        per_checkpoint[i].push_back(objective.max_value() -
                                    res.checkpoint_best[i]);
      }
      accept_rates.push_back(res.accept_rate);
      if (r == 0 && !options.quiet) {
        for (const auto& w : res.warnings) log << "warning: " << w << "\n";
      }
    }

    const auto stop = std::chrono::steady_clock::now();
    const double wall =
        std::chrono::duration<double>(stop - start).count();

    std::string summary;
    summary += "objective " + config.objective + "\n";
    summary += "dim " + std::to_string(config.dim) + "\n";
    summary += "iterations " + std::to_string(config.iterations) + "\n";
    summary += "replications " + std::to_string(config.replications) + "\n";
    summary += "phi_star " + fmt(objective.max_value()) + "\n";
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      std::vector<double> gaps = per_checkpoint[i];
      std::sort(gaps.begin(), gaps.end());
      const std::string prefix =
          "checkpoint_" + std::to_string(checkpoints[i]) + "_gap_";
      summary += prefix + "min " + fmt(gaps.front()) + "\n";
      summary += prefix + "q25 " + fmt(nearest_rank(gaps, 0.25)) + "\n";
      summary += prefix + "median " + fmt(nearest_rank(gaps, 0.5)) + "\n";
      summary += prefix + "q75 " + fmt(nearest_rank(gaps, 0.75)) + "\n";
      summary += prefix + "max " + fmt(gaps.back()) + "\n";
    }
    {
      double mean = 0.0;
      for (double a : accept_rates) mean += a;
      mean /= static_cast<double>(accept_rates.size());
      std::vector<double> sorted = accept_rates;
      std::sort(sorted.begin(), sorted.end());
      summary += "acceptance_rate_mean " + fmt(mean) + "\n";
      summary +=
          "acceptance_rate_median " + fmt(nearest_rank(sorted, 0.5)) + "\n";
    }
    {
      std::ofstream f(fs::path(out_dir) / "summary.txt", std::ios::binary);
      f << summary;
    }
    {
      std::ofstream f(fs::path(out_dir) / "timing.txt", std::ios::binary);
      f << "wall_seconds " << fmt(wall) << "\n";
    }
    if (!options.quiet) {
      log << "wrote " << config.replications << " trace(s) to " << out_dir
          << " in " << fmt(wall) << "s\n";
    }
    return 0;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// verify_suite

namespace {

struct LinePrinter {
  std::ostream& out;
  bool all_pass = true;
  void line(bool pass, const std::string& text) {
    out << (pass ? "PASS " : "FAIL ") << text << "\n";
    if (!pass) all_pass = false;
  }
  void warn(const std::string& text) { out << "WARN " << text << "\n"; }
};

void verify_nets(LinePrinter& p) {
  for (int s = 1; s <= 5; ++s) {
    const DigitTable table = DigitTable::builtin(s);
    const int t = table.declared_t(s);
    for (int m = t; m <= DigitTable::max_verified_resolution(); ++m) {
      const std::uint64_t count = std::uint64_t{1} << m;
      std::vector<std::vector<double>> points;
      points.reserve(count);
      for (std::uint64_t n = 0; n < count; ++n) {
        points.push_back(ts_point(table, n, s));
      }
      NetParams params{2, t, m, s};
      const NetCheckResult res = verify_net(points, params);
      std::ostringstream os;
      os << "nets s=" << s << " t=" << t << " m=" << m;
      p.line(res.pass, os.str());
    }
  }
}

void verify_kernels(LinePrinter& p) {
  const std::vector<double> xs = {0.0, 0.2, 0.5, 0.77, 1.0};
  const std::vector<double> sigmas = {1.0, 0.3, 0.05};
  const std::vector<double> us = {0.0, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0};

  struct Case {
    std::string name;
    std::function<double(double, double, double)> inv;  // (x, sigma, u) -> y
    std::function<double(double, double, double)> cdf;  // (y, x, sigma) -> u
    double tol;
  };
  std::vector<Case> cases;
  cases.push_back({"cauchy_round_trip",
                   [](double x, double s, double u) {
                     return student_inv_cdf(x, Dof::finite(1), s, u);
                   },
                   [](double y, double x, double s) {
                     return student_cdf(y, x, Dof::finite(1), s);
                   },
                   1e-9});
  cases.push_back({"gaussian_round_trip",
                   [](double x, double s, double u) {
                     return student_inv_cdf(x, Dof::infinite(), s, u);
                   },
                   [](double y, double x, double s) {
                     return student_cdf(y, x, Dof::infinite(), s);
                   },
                   1e-9});
  cases.push_back({"student3_round_trip",
                   [](double x, double s, double u) {
                     return student_inv_cdf(x, Dof::finite(3), s, u);
                   },
                   [](double y, double x, double s) {
                     return student_cdf(y, x, Dof::finite(3), s);
                   },
                   1e-8});
  cases.push_back({"asa_round_trip",
                   [](double x, double s, double u) {
                     return asa_inv_cdf(x, s, u);
                   },
                   [](double y, double x, double s) {
                     return asa_cdf(y, x, s);
                   },
                   1e-9});
  for (const auto& c : cases) {
    double max_err = 0.0;
    for (double x : xs) {
      for (double s : sigmas) {
        for (double u : us) {
          const double y = c.inv(x, s, u);
          const double back = c.cdf(y, x, s);
          max_err = std::max(max_err, std::abs(back - u));
        }
      }
    }
    std::ostringstream os;
    os << "kernels " << c.name << " max_err=" << max_err << " tol=" << c.tol;
    p.line(max_err <= c.tol, os.str());
  }

  // Frozen per-coordinate anchors.
  {
    const double v = student_density(0.0, 0.0, Dof::finite(1), 1.0);
    p.line(std::abs(v - 4.0 / 3.14159265358979323846) <= 1e-12,
           "kernels cauchy_center_density");
    const double y = student_inv_cdf(0.0, Dof::finite(1), 1.0, 0.5);
    p.line(std::abs(y - (std::sqrt(2.0) - 1.0)) <= 1e-12,
           "kernels cauchy_median_map");
    const double a = asa_density(0.0, 0.0, 1.0);
    p.line(std::abs(a - 1.0 / std::log(2.0)) <= 1e-12,
           "kernels asa_center_density");
    p.line(asa_inv_cdf(0.0, 1.0, 1.0) == 1.0, "kernels asa_full_range");
  }

  // Density floors hold on a coarse grid.
  for (const char* fam : {"student", "asa"}) {
    const ScaleSchedule sched = ScaleSchedule::power(0.5, 0.5);
    const KernelSpec kernel =
        std::string(fam) == "student"
            ? KernelSpec::student(1, Dof::finite(1), sched,
                                  Adaptation::every_step())
            : KernelSpec::asa(1, sched, Adaptation::every_step());
    bool ok = true;
    for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{10},
                            std::uint64_t{1000}}) {
      const double floor = density_floor(kernel, n);
      for (int i = 0; i <= 20 && ok; ++i) {
        for (int k = 0; k <= 20; ++k) {
          const std::vector<double> x{i / 20.0};
          const std::vector<double> y{k / 20.0};
          if (density(kernel, n, x, y) < floor - 1e-9) {
            ok = false;
            break;
          }
        }
      }
    }
    p.line(ok, std::string("kernels density_floor_grid_") + fam);
  }
}

void verify_conditions(LinePrinter& p, const ExperimentConfig& cfg) {
  const KernelSpec kernel = cfg.make_kernel();
  const CoolingSchedule cooling = cfg.make_cooling();
  CheckMode mode = CheckMode::finite_randomness;
  if (cfg.level.is_infinite()) {
    mode = CheckMode::deterministic;
  } else if (cfg.level.value() == 0) {
    mode = CheckMode::monte_carlo;
  }
  const std::uint64_t horizon =
      std::max<std::uint64_t>(10, std::min<std::uint64_t>(cfg.iterations,
                                                          100000));
  const ConditionReport report =
      check_conditions(kernel, cooling, mode, horizon);
  for (const auto& e : report.entries) {
    std::ostringstream os;
    os << "conditions " << to_string(e.id) << " verdict=" << to_string(e.verdict)
       << " :: " << e.note;
    if (e.verdict == Verdict::conjectured || e.verdict == Verdict::undecidable) {
      p.warn(os.str());
    } else {
      p.line(e.verdict != Verdict::fail, os.str());
    }
  }
  for (const auto& n : report.notes) p.warn("conditions note :: " + n);

  // Acceptance-coordinate floor law for the driver's randomization level.
  const AcceptanceFloorReport floor = check_acceptance_floor(
      cfg.base, cfg.level, 10000, 0.5, cfg.seed);
  std::ostringstream os;
  os << "conditions acceptance_floor R=" << cfg.level.str()
     << " burn_in=" << floor.burn_in;
  p.line(floor.pass, os.str());
}

}  // namespace

int verify_suite(const std::string& suite,
                 const std::optional<ExperimentConfig>& config,
                 std::ostream& out) {
  LinePrinter printer{out};
  if (suite == "nets") {
    verify_nets(printer);
  } else if (suite == "kernels") {
    verify_kernels(printer);
  } else if (suite == "conditions") {
    if (!config.has_value()) {
      throw ConfigError("the conditions suite needs --config");
    }
    verify_conditions(printer, *config);
  } else {
    throw ConfigError("unknown suite: " + suite);
  }
  out << (printer.all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return printer.all_pass ? 0 : 1;
}

}  // namespace tsr
