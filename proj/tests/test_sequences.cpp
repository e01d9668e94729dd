#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tsr/sequences.hpp"

using namespace tsr;

namespace {

std::string share_dir() { return TSR_SHARE_DIR; }

std::vector<std::vector<double>> sequence_block(const DigitTable& table,
                                                std::uint64_t first,
                                                std::uint64_t count, int dims) {
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (std::uint64_t n = first; n < first + count; ++n)
    pts.push_back(ts_point(table, n, dims));
  return pts;
}

}  // namespace

TEST_CASE("radical inverse: pinned values and digit-reversal oracle") {
  CHECK(radical_inverse(0, 2) == 0.0);
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(6, 2) == 0.375);
  CHECK(radical_inverse(2, 2) == 0.25);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(1, 10) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(radical_inverse(12, 10) == doctest::Approx(0.21).epsilon(1e-15));

  for (std::uint64_t n = 0; n < 4096; ++n) {
    CHECK(radical_inverse(n, 2) == oracle::radical_inverse_base2(n));
  }
  for (std::uint64_t n = 0; n < 2048; ++n) {
    CHECK(radical_inverse(n, 3) ==
          doctest::Approx(oracle::radical_inverse_exact(n, 3)).epsilon(1e-14));
    CHECK(radical_inverse(n, 5) ==
          doctest::Approx(oracle::radical_inverse_exact(n, 5)).epsilon(1e-14));
  }
  CHECK(radical_inverse(1, 2) >= 0.0);
  CHECK_THROWS_AS(radical_inverse(1, 1), std::invalid_argument);
}

TEST_CASE("deterministic points: first van der Corput values and origin") {
  DigitTable table = DigitTable::builtin(5);
  std::vector<double> expected{0.0, 0.5, 0.25, 0.75};
  for (std::uint64_t n = 0; n < expected.size(); ++n) {
    auto p = ts_point(table, n, 1);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == expected[n]);
  }
  auto origin = ts_point(table, 0, 5);
  for (double c : origin) CHECK(c == 0.0);
  // Dimension 1 stays the plain radical inverse at every index.
  for (std::uint64_t n = 0; n < 512; ++n)
    CHECK(ts_point(table, n, 1)[0] == radical_inverse(n, 2));
}

TEST_CASE("deterministic points: coordinates live in [0,1)") {
  DigitTable table = DigitTable::builtin(10);
  for (std::uint64_t n = 0; n < 2000; ++n) {
    auto p = ts_point(table, n, 10);
    for (double c : p) {
      CHECK(c >= 0.0);
      CHECK(c < 1.0);
    }
  }
}

TEST_CASE("digit table: shipped direction file matches the builtin table") {
  DigitTable builtin = DigitTable::builtin(10);
  DigitTable loaded =
      DigitTable::load_file(share_dir() + "/sobol_directions.txt", 10);
  REQUIRE(loaded.dimensions() == 10);
  for (std::uint64_t n = 0; n < 1024; ++n)
    for (int dim = 1; dim <= 10; ++dim)
      CHECK(loaded.raw_bits(n, dim) == builtin.raw_bits(n, dim));
  CHECK_THROWS_AS(DigitTable::load_file(share_dir() + "/no_such_table.txt"),
                  std::runtime_error);
}

TEST_CASE("digit table: declared quality parameters") {
  DigitTable table = DigitTable::builtin(10);
  CHECK(table.declared_t(1) == 0);
  CHECK(table.declared_t(2) == 0);
  CHECK(table.declared_t(3) == 1);
  CHECK(table.declared_t(4) == 3);
  CHECK(table.declared_t(5) == 5);
  CHECK_THROWS_AS(table.declared_t(11), std::invalid_argument);
  CHECK_THROWS_AS(DigitTable::builtin(11), std::invalid_argument);
  CHECK_THROWS_AS(DigitTable::builtin(0), std::invalid_argument);
}

TEST_CASE("randomization: digit truncation pinned examples") {
  const double u = 0.375;  // binary 0.011
  CHECK(truncate_randomize(u, Randomness::finite(0), 2, 0.3) == 0.3);
  CHECK(truncate_randomize(u, Randomness::finite(1), 2, 0.3) == 0.5 * 0.3);
  CHECK(truncate_randomize(u, Randomness::finite(2), 2, 0.3) ==
        0.25 + 0.25 * 0.3);
  CHECK(truncate_randomize(u, Randomness::finite(1), 2, 0.3) ==
        doctest::Approx(0.15).epsilon(1e-15));
  CHECK(truncate_randomize(u, Randomness::finite(2), 2, 0.3) ==
        doctest::Approx(0.325).epsilon(1e-15));
  CHECK(truncate_randomize(u, Randomness::infinite(), 2, 0.9) == u);
  // At the digit capacity the kept prefix is u itself and the noise tail is
  // below one unit in the last place of the grid.
  const double full = truncate_randomize(u, Randomness::finite(53), 2, 0.9);
  CHECK(full >= u);
  CHECK(full < u + std::ldexp(1.0, -52));
  CHECK_THROWS_AS(truncate_randomize(0.5, Randomness::finite(1), 2, 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncate_randomize(1.5, Randomness::finite(1), 2, 0.5),
                  std::invalid_argument);
}

TEST_CASE("randomization: truncation keeps exactly the first R digits") {
  DigitTable table = DigitTable::builtin(3);
  for (int R : {1, 2, 3, 7}) {
    const double scale = std::ldexp(1.0, R);
    for (std::uint64_t n = 1; n <= 600; ++n) {
      auto u = ts_point(table, n, 3);
      std::vector<double> noise{0.137, 0.9213, 0.5};
      auto v = truncate_randomize(u, Randomness::finite(R), 2, noise);
      for (int j = 0; j < 3; ++j) {
        CHECK(std::floor(v[j] * scale) == std::floor(u[j] * scale));
        CHECK(v[j] >= 0.0);
        CHECK(v[j] < 1.0);
      }
    }
  }
}

TEST_CASE("randomization: parsing and printing of the level") {
  CHECK(Randomness::parse("0") == Randomness::finite(0));
  CHECK(Randomness::parse("7") == Randomness::finite(7));
  CHECK(Randomness::parse("inf") == Randomness::infinite());
  CHECK(Randomness::infinite().is_infinite());
  CHECK(Randomness::finite(3).value() == 3);
  CHECK(Randomness::finite(3).str() == "3");
  CHECK(Randomness::infinite().str() == "inf");
  CHECK_THROWS_AS(Randomness::parse("-1"), std::invalid_argument);
  CHECK_THROWS_AS(Randomness::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Randomness::infinite().value(), std::logic_error);
}

TEST_CASE("net checker: pinned pass and fail examples") {
  std::vector<std::vector<double>> good{{0.0}, {0.5}, {0.25}, {0.75}};
  CHECK(verify_net(good, NetParams{2, 0, 2, 1}).pass);

  std::vector<std::vector<double>> bad{{0.0}, {0.1}, {0.2}, {0.3}};
  auto res = verify_net(bad, NetParams{2, 0, 2, 1});
  CHECK_FALSE(res.pass);
  REQUIRE(res.violation.has_value());
  // The failing box [0, 0.25) holds three of the four points.
  CHECK(res.violation->count == 3);
  CHECK(res.violation->expected == 1);

  // t = m makes every admissible box the whole cube: any b^t points pass.
  std::vector<std::vector<double>> anything{{0.3}, {0.3}, {0.3}, {0.3}};
  CHECK(verify_net(anything, NetParams{2, 2, 2, 1}).pass);

  CHECK_THROWS_AS(verify_net(good, NetParams{2, 0, 3, 1}),
                  std::invalid_argument);  // wrong point count
}

TEST_CASE("net checker: builtin table passes at its declared quality") {
  for (int s = 1; s <= 5; ++s) {
    DigitTable table = DigitTable::builtin(s);
    const int t = table.declared_t(s);
    for (int m = t; m <= 7; ++m) {
      auto pts = sequence_block(table, 0, std::uint64_t{1} << m, s);
      auto res = verify_net(pts, NetParams{2, t, m, s});
      INFO("s=", s, " m=", m);
      CHECK(res.pass);
    }
  }
}

TEST_CASE("net checker: aligned later blocks are nets too") {
  for (int s : {1, 2, 3}) {
    DigitTable table = DigitTable::builtin(s);
    const int t = table.declared_t(s);
    for (int m = std::max(t, 2); m <= 6; ++m) {
      for (std::uint64_t a : {std::uint64_t{1}, std::uint64_t{3},
                              std::uint64_t{5}}) {
        const std::uint64_t len = std::uint64_t{1} << m;
        auto pts = sequence_block(table, a * len, len, s);
        INFO("s=", s, " m=", m, " a=", a);
        CHECK(verify_net(pts, NetParams{2, t, m, s}).pass);
      }
    }
  }
}

TEST_CASE("block indices: pinned examples and brute-force scan") {
  CHECK(block_indices(5, 2, 1, Randomness::finite(0), 0).k == 3);
  auto b1 = block_indices(1, 2, 1, Randomness::finite(1), 0);
  REQUIRE(b1.r.has_value());
  CHECK(*b1.r == 1);
  auto b4 = block_indices(4, 2, 1, Randomness::finite(1), 0);
  REQUIRE(b4.r.has_value());
  CHECK(*b4.r == 3);
  auto binf = block_indices(9, 2, 1, Randomness::infinite(), 0);
  CHECK(binf.k == 4);
  CHECK_FALSE(binf.r.has_value());

  for (int base : {2, 3}) {
    for (int dim : {1, 2}) {
      for (int R : {0, 1, 2}) {
        for (int t : {0, 1}) {
          std::uint64_t block = 1;
          for (int i = 0; i < dim * R + t; ++i)
            block *= static_cast<std::uint64_t>(base);
          for (std::uint64_t n = 1; n <= 700; ++n) {
            auto bi = block_indices(n, base, dim, Randomness::finite(R), t);
            CHECK(bi.k == oracle::resolution_index(n, base));
            REQUIRE(bi.r.has_value());
            CHECK(*bi.r == oracle::block_count_index(n, block));
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(block_indices(0, 2, 1, Randomness::finite(0), 0),
                  std::invalid_argument);
}

TEST_CASE("adaptation boundaries: pinned examples") {
  auto mc = adaptation_boundaries(2, 1, Randomness::finite(0), 0, 6);
  CHECK(mc == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});
  auto r1 = adaptation_boundaries(2, 1, Randomness::finite(1), 0, 8);
  CHECK(r1 == std::vector<std::uint64_t>{1, 2, 4, 6, 8});
  CHECK_THROWS_AS(
      adaptation_boundaries(2, 1, Randomness::infinite(), 0, 10),
      std::invalid_argument);
}

TEST_CASE("adaptation boundaries: agree with the enumeration oracle") {
  for (int base : {2, 3}) {
    for (int dim : {1, 2}) {
      for (int R : {0, 1, 2}) {
        for (int t : {0, 1}) {
          auto got =
              adaptation_boundaries(base, dim, Randomness::finite(R), t, 1000);
          auto want = oracle::boundaries_bruteforce(base, dim, R, t, 1000);
          INFO("b=", base, " d=", dim, " R=", R, " t=", t);
          CHECK(got == want);
        }
      }
    }
  }
}

TEST_CASE("adaptation boundaries: structural properties") {
  auto bs = adaptation_boundaries(2, 2, Randomness::finite(2), 1, 4000);
  REQUIRE(!bs.empty());
  CHECK(bs.front() == 1);
  const std::uint64_t block = 1 << (2 * 2 + 1);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i > 0) CHECK(bs[i] > bs[i - 1]);
    if (bs[i] == 1) continue;
    const bool is_pow2 = (bs[i] & (bs[i] - 1)) == 0;
    const bool is_multiple = bs[i] % block == 0;
    CHECK((is_pow2 || is_multiple));
  }
}

TEST_CASE("driver: index zero is reserved and streaming starts at one") {
  DigitTable table = DigitTable::builtin(2);
  DriverConfig cfg;
  cfg.dim = 2;
  cfg.level = Randomness::infinite();
  SequenceDriver driver(table, cfg);
  CHECK(driver.next_index() == 1);
  auto det0 = driver.deterministic_point(0);
  for (double c : det0.proposal) CHECK(c == 0.0);
  CHECK(det0.accept == 0.0);
  auto first = driver.next();
  CHECK(driver.next_index() == 2);
  CHECK(first.proposal == driver.deterministic_point(1).proposal);
  CHECK(first.accept == 0.5);  // radical inverse of n = 1
}

TEST_CASE("driver: fully random level reproduces the raw noise stream") {
  DigitTable table = DigitTable::builtin(3);
  DriverConfig cfg;
  cfg.dim = 3;
  cfg.level = Randomness::finite(0);
  cfg.seed = 42;
  SequenceDriver driver(table, cfg);
  for (std::uint64_t n = 1; n <= 300; ++n) {
    auto p = driver.next();
    for (int j = 0; j < 3; ++j) {
      CHECK(p.proposal[j] ==
            uniform_noise(42, n, static_cast<std::uint32_t>(j + 1)));
    }
    CHECK(p.accept == uniform_noise(42, n, 4));
  }
}

TEST_CASE("driver: digit-prefix law for finite randomization levels") {
  DigitTable table = DigitTable::builtin(2);
  for (int R : {1, 2, 3}) {
    DriverConfig cfg;
    cfg.dim = 2;
    cfg.level = Randomness::finite(R);
    cfg.seed = 7;
    SequenceDriver driver(table, cfg);
    const double scale = std::ldexp(1.0, R);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      auto noisy = driver.next();
      auto det = driver.deterministic_point(n);
      for (int j = 0; j < 2; ++j) {
        CHECK(std::floor(noisy.proposal[j] * scale) ==
              std::floor(det.proposal[j] * scale));
      }
      CHECK(std::floor(noisy.accept * scale) ==
            std::floor(det.accept * scale));
    }
  }
}

TEST_CASE("driver: reproducibility by seed and level") {
  DigitTable table = DigitTable::builtin(2);
  DriverConfig cfg;
  cfg.dim = 2;
  cfg.level = Randomness::finite(3);
  cfg.seed = 11;
  SequenceDriver a(table, cfg), b(table, cfg);
  bool all_equal = true;
  for (int i = 0; i < 500; ++i) {
    auto pa = a.next(), pb = b.next();
    if (pa.proposal != pb.proposal || pa.accept != pb.accept)
      all_equal = false;
  }
  CHECK(all_equal);

  cfg.seed = 12;
  SequenceDriver c(table, cfg);
  SequenceDriver d(table, DriverConfig{2, 2, -1, Randomness::finite(3), 11});
  bool any_diff = false;
  for (int i = 0; i < 500; ++i) {
    auto pc = c.next(), pd = d.next();
    if (pc.proposal != pd.proposal) any_diff = true;
  }
  CHECK(any_diff);

  // Infinite level ignores the seed entirely.
  DriverConfig e_cfg{2, 2, -1, Randomness::infinite(), 1};
  DriverConfig f_cfg{2, 2, -1, Randomness::infinite(), 999};
  SequenceDriver e(table, e_cfg), f(table, f_cfg);
  for (int i = 0; i < 500; ++i) {
    auto pe = e.next(), pf = f.next();
    CHECK(pe.proposal == pf.proposal);
    CHECK(pe.accept == pf.accept);
  }
}

TEST_CASE("driver: configuration validation") {
  DigitTable table = DigitTable::builtin(4);
  CHECK_THROWS_AS(
      SequenceDriver(table, DriverConfig{3, 2, -1, Randomness::finite(1), 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SequenceDriver(table, DriverConfig{2, 5, -1, Randomness::finite(1), 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SequenceDriver(table, DriverConfig{2, 0, -1, Randomness::finite(1), 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SequenceDriver(table, DriverConfig{2, 2, -1, Randomness::finite(54), 0}),
      std::invalid_argument);
}

TEST_CASE("acceptance floor: deterministic stream obeys the exact law") {
  auto rep = check_acceptance_floor(2, Randomness::infinite(), 20000, 0.5, 0);
  CHECK(rep.pass);
  CHECK(rep.burn_in == 0);
  CHECK_FALSE(rep.violation.has_value());

  // Direct spot checks of the bound u^n >= b^-k_n.
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(3, 2) >= 0.25);  // k_3 = 2
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(1, 2) >= 0.5);  // k_1 = 1
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    const double bound =
        std::ldexp(1.0, -oracle::resolution_index(n, 2));
    CHECK(radical_inverse(n, 2) >= bound);
  }
}

TEST_CASE("acceptance floor: randomized streams pass after burn-in") {
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    auto rep =
        check_acceptance_floor(2, Randomness::finite(2), 20000, 0.5, seed);
    INFO("seed=", seed);
    CHECK(rep.pass);
  }
}
