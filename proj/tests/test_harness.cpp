#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsr/harness.hpp"

using namespace tsr;
namespace fs = std::filesystem;

namespace {

std::string cli_path() { return TSR_CLI_PATH; }

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::path("harness_test_tmp") / tag;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli_output.log";
  const std::string cmd =
      cli_path() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(log);
  return r;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("config: defaults and round-trip echo") {
  auto c = ExperimentConfig::from_json_text("{}");
  CHECK(c.objective == "sphere");
  CHECK(c.dim == 1);
  CHECK(c.kernel_family == "student");
  CHECK(c.nu == Dof::finite(1));
  CHECK(c.level == Randomness::finite(0));
  CHECK(c.iterations == 1000);
  CHECK(c.resolved_adaptation() == "blocks");
  CHECK(c.resolved_quality() == 0);
  CHECK(c.resolved_x0() == std::vector<double>{0.5});
  CHECK(c.resolved_checkpoints() ==
        std::vector<std::uint64_t>{100, 1000});

  // The effective echo is a fixed point of parse -> echo.
  const std::string echo = c.effective_json_text();
  auto re = ExperimentConfig::from_json_text(echo);
  CHECK(re.effective_json_text() == echo);
  CHECK(echo.find("\"out\"") == std::string::npos);
  CHECK(echo.find("\"adaptation\": \"blocks\"") != std::string::npos);

  auto inf = ExperimentConfig::from_json_text(R"({"R": "inf"})");
  CHECK(inf.level.is_infinite());
  CHECK(inf.resolved_adaptation() == "every_step");
  auto echo_inf =
      ExperimentConfig::from_json_text(inf.effective_json_text());
  CHECK(echo_inf.level.is_infinite());
}

TEST_CASE("config: custom values parse") {
  auto c = ExperimentConfig::from_json_text(R"({
    "objective": "multicos", "d": 2, "kernel": "asa",
    "sigma_family": "exp_power", "sigma0": 1.0, "sigma_rate": 0.5,
    "R": 4, "cooling": "power_log", "T0": 2.0, "cooling_c": 3.5,
    "iterations": 500, "replications": 3, "seed": 9,
    "x0": [0.1, 0.9], "checkpoints": [10, 100, 500], "stride": 5
  })");
  CHECK(c.objective == "multicos");
  CHECK(c.dim == 2);
  CHECK(c.kernel_family == "asa");
  CHECK(c.sigma_family == "exp_power");
  CHECK(c.level == Randomness::finite(4));
  CHECK(c.cooling_family == "power_log");
  CHECK(c.replications == 3);
  CHECK(c.x0 == std::vector<double>{0.1, 0.9});
  CHECK(c.resolved_checkpoints() ==
        std::vector<std::uint64_t>{10, 100, 500});
  CHECK(c.stride == 5);
  // Checkpoints beyond the horizon are dropped; N itself is appended.
  auto c2 = ExperimentConfig::from_json_text(
      R"({"iterations": 50, "checkpoints": [10, 60]})");
  CHECK(c2.resolved_checkpoints() == std::vector<std::uint64_t>{10, 50});
}

TEST_CASE("config: rejection of malformed input") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"color": "red"})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"d": "two"})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"d": 11})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"b": 3})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"R": -1})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"R": "lots"})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"nu": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(
          R"({"adaptation": "blocks", "R": "inf"})"),
      ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"kernel": "levy"})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"objective": "ackley"})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"stride": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"replications": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"x0": [0.5, 0.5]})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"x0": [1.5]})"),
                  ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(R"({"sigma_family": "exp_power",
                                           "sigma_rate": 0.0})"),
      ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"T0": -1.0})"),
                  ConfigError);
}

TEST_CASE("run: output files, zero iterations, determinism") {
  auto dir = fresh_dir("run_basic");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "objective": "sphere", "d": 1, "iterations": 0, "x0": [0.2]
  })");
  HarnessOptions opts;
  opts.workers = 1;
  opts.quiet = true;
  opts.out_override = (dir / "a").string();
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, opts, log) == 0);

  const std::string csv = slurp(dir / "a" / "trace_000.csv");
  // Header plus the initial row only.
  CHECK(count_lines(csv) == 2);
  CHECK(csv.rfind("n,x_1,value,best_value,accepted,A_n,T_n,sigma_eff,"
                  "kernel_index\n",
                  0) == 0);
  CHECK(csv.find("\n0,0.2,") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "config_effective.json"));
  CHECK(fs::exists(dir / "a" / "summary.txt"));
  CHECK(fs::exists(dir / "a" / "timing.txt"));
  CHECK(slurp(dir / "a" / "timing.txt").rfind("wall_seconds ", 0) == 0);

  // Identical configs produce byte-identical traces and summaries.
  ExperimentConfig cfg2 = ExperimentConfig::from_json_text(R"({
    "objective": "multicos", "d": 2, "iterations": 300, "replications": 2,
    "R": 3, "seed": 5
  })");
  HarnessOptions o1 = opts;
  o1.out_override = (dir / "b1").string();
  HarnessOptions o2 = opts;
  o2.workers = 4;  // concurrency must not affect results
  o2.out_override = (dir / "b2").string();
  REQUIRE(run_experiment(cfg2, o1, log) == 0);
  REQUIRE(run_experiment(cfg2, o2, log) == 0);
  for (const char* f :
       {"trace_000.csv", "trace_001.csv", "summary.txt",
        "config_effective.json"}) {
    CHECK(slurp(dir / "b1" / f) == slurp(dir / "b2" / f));
  }
  // Replications with a finite level differ from each other.
  CHECK(slurp(dir / "b1" / "trace_000.csv") !=
        slurp(dir / "b1" / "trace_001.csv"));

  // The effective echo reproduces the run byte for byte.
  auto echoed = ExperimentConfig::from_json_file(
      (dir / "b1" / "config_effective.json").string());
  HarnessOptions o3 = opts;
  o3.out_override = (dir / "b3").string();
  REQUIRE(run_experiment(echoed, o3, log) == 0);
  CHECK(slurp(dir / "b1" / "trace_000.csv") ==
        slurp(dir / "b3" / "trace_000.csv"));
  CHECK(slurp(dir / "b1" / "summary.txt") == slurp(dir / "b3" / "summary.txt"));
}

TEST_CASE("run: stride thins rows but keeps checkpoints") {
  auto dir = fresh_dir("run_stride");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "objective": "sphere", "d": 1, "iterations": 250, "stride": 100,
    "checkpoints": [30, 130]
  })");
  HarnessOptions opts;
  opts.workers = 1;
  opts.quiet = true;
  opts.out_override = (dir / "out").string();
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, opts, log) == 0);
  const std::string csv = slurp(dir / "out" / "trace_000.csv");
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::uint64_t> ns;
  std::getline(lines, line);  // header
  while (std::getline(lines, line))
    ns.push_back(std::stoull(line.substr(0, line.find(','))));
  // Initial row, stride multiples, checkpoints, and the final step.
  CHECK(ns == std::vector<std::uint64_t>{0, 30, 100, 130, 200, 250});
}

TEST_CASE("run: summary schema") {
  auto dir = fresh_dir("run_summary");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "objective": "multicos", "d": 2, "iterations": 200, "replications": 3,
    "R": 2, "checkpoints": [50, 200]
  })");
  HarnessOptions opts;
  opts.workers = 2;
  opts.quiet = true;
  opts.out_override = (dir / "out").string();
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, opts, log) == 0);
  const std::string summary = slurp(dir / "out" / "summary.txt");
  for (const char* key :
       {"objective multicos", "dim 2", "iterations 200", "replications 3",
        "phi_star 0", "checkpoint_50_gap_min", "checkpoint_50_gap_q25",
        "checkpoint_50_gap_median", "checkpoint_50_gap_q75",
        "checkpoint_50_gap_max", "checkpoint_200_gap_median",
        "acceptance_rate_mean", "acceptance_rate_median"}) {
    INFO("key: ", key);
    CHECK(summary.find(key) != std::string::npos);
  }
  // Gaps never go negative (best_value <= phi*).
  std::istringstream lines(summary);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find("_gap_") == std::string::npos) continue;
    const double v = std::stod(line.substr(line.rfind(' ')));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("cli: exit codes") {
  auto dir = fresh_dir("cli_codes");
  spit(dir / "good.json",
       R"({"objective": "sphere", "d": 1, "iterations": 20})");
  spit(dir / "bad_syntax.json", "{oops");
  spit(dir / "bad_key.json", R"({"flavor": "mint"})");

  auto ok = run_cli("run --config " + (dir / "good.json").string() +
                        " --out " + (dir / "ok_out").string() + " --quiet",
                    dir);
  CHECK(ok.exit_code == 0);
  CHECK(fs::exists(dir / "ok_out" / "trace_000.csv"));

  auto bad1 = run_cli("run --config " + (dir / "bad_syntax.json").string(),
                      dir);
  CHECK(bad1.exit_code == 2);
  auto bad2 = run_cli("run --config " + (dir / "bad_key.json").string(), dir);
  CHECK(bad2.exit_code == 2);
  CHECK(bad2.output.find("flavor") != std::string::npos);
  auto bad3 = run_cli("run --config " + (dir / "missing.json").string(), dir);
  CHECK(bad3.exit_code == 2);
  auto bad4 = run_cli("verify --suite tea_leaves", dir);
  CHECK(bad4.exit_code == 2);
  auto bad5 = run_cli("", dir);
  CHECK(bad5.exit_code == 2);  // a subcommand is required

  // A valid config that fails at runtime (unwritable output) exits 1.
  auto rt = run_cli("run --config " + (dir / "good.json").string() +
                        " --out /proc/tsr_cannot_write_here --quiet",
                    dir);
  CHECK(rt.exit_code == 1);
}

TEST_CASE("cli: verification suites") {
  auto dir = fresh_dir("cli_verify");
  auto nets = run_cli("verify --suite nets", dir);
  CHECK(nets.exit_code == 0);
  CHECK(nets.output.find("PASS") != std::string::npos);
  CHECK(nets.output.find("FAIL") == std::string::npos);
  CHECK(nets.output.find("ALL PASS") != std::string::npos);

  auto kernels = run_cli("verify --suite kernels", dir);
  CHECK(kernels.exit_code == 0);
  CHECK(kernels.output.find("FAIL") == std::string::npos);

  // A configuration satisfying every hypothesis.
  spit(dir / "good.json", R"({
    "objective": "sphere", "d": 1, "kernel": "student", "nu": 1,
    "sigma_family": "power", "sigma0": 1.0, "sigma_beta": 1.0,
    "R": 2, "cooling": "power", "cooling_a": 2.0, "iterations": 10000
  })");
  auto good = run_cli(
      "verify --suite conditions --config " + (dir / "good.json").string(),
      dir);
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("family_scale_rate") != std::string::npos);
  CHECK(good.output.find("acceptance_floor") != std::string::npos);

  // sigma_n = n^-2 violates the Cauchy scale-rate hypothesis.
  spit(dir / "bad.json", R"({
    "objective": "sphere", "d": 1, "kernel": "student", "nu": 1,
    "sigma_family": "power", "sigma0": 1.0, "sigma_beta": 2.0,
    "R": 2, "cooling": "power", "cooling_a": 2.0, "iterations": 10000
  })");
  auto bad = run_cli(
      "verify --suite conditions --config " + (dir / "bad.json").string(),
      dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("FAIL") != std::string::npos);

  // The conditions suite requires a config.
  auto none = run_cli("verify --suite conditions", dir);
  CHECK(none.exit_code == 2);
}

TEST_CASE("trace rows: locale-free shortest-round-trip numbers") {
  auto dir = fresh_dir("run_numbers");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "objective": "sphere", "d": 2, "iterations": 40, "R": 1, "x0": [0.3, 0.7]
  })");
  HarnessOptions opts;
  opts.workers = 1;
  opts.quiet = true;
  opts.out_override = (dir / "out").string();
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, opts, log) == 0);
  const std::string csv = slurp(dir / "out" / "trace_000.csv");
  CHECK(csv.find(',') != std::string::npos);
  CHECK(csv.find(';') == std::string::npos);   // no locale decimal commas
  CHECK(csv.find("nan") == std::string::npos);
  CHECK(csv.find("inf") == std::string::npos);
  // Values parse back as doubles and x stays in the unit box.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // n
    for (int i = 0; i < 2; ++i) {
      std::getline(cells, cell, ',');
      const double x = std::stod(cell);
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}
