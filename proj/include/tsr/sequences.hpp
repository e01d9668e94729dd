#pragma once

// Digital (t,s)-sequences in base b, their digit-truncated randomizations
// ((t,s)_R-sequences), and the index machinery that schedules kernel
// adaptation for the annealer driven by them.
//
// Conventions used throughout:
//   * point index n starts at 0 for the deterministic sequence; the driver
//     reserves index 0 (whose point is the origin) and hands out n >= 1.
//   * base-2 digit expansions are capped at 53 digits (double mantissa);
//     indices or digit counts beyond that capacity raise std::overflow_error.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsr {

inline constexpr int kDigitCapacity = 53;

// Randomization level R of a (t,s)_R-sequence. R = 0 discards every
// deterministic digit (i.i.d. uniform noise), finite R > 0 keeps the first R
// base-b digits and fills the tail with scaled noise, infinite() keeps the
// whole deterministic expansion.
class Randomness {
 public:
  static Randomness finite(int r);
  static Randomness infinite();
  // Accepts a non-negative integer literal or "inf".
  static Randomness parse(const std::string& text);

  bool is_infinite() const { return r_ < 0; }
  int value() const;  // throws std::logic_error when infinite
  std::string str() const;

  friend bool operator==(const Randomness& a, const Randomness& b) {
    return a.r_ == b.r_;
  }

 private:
  explicit Randomness(int r) : r_(r) {}
  int r_;  // -1 encodes infinity
};

// Van der Corput radical inverse of n in the given base (digit reversal
// across the radix point). Returns 0 iff n == 0.
double radical_inverse(std::uint64_t n, int base);

// Direction-number table for a base-2 digital construction. Dimension 1 is
// the van der Corput sequence (all direction integers 1); higher dimensions
// come from primitive-polynomial recurrences. Quality parameters t are
// declared per dimension count and are validated by verify_net in the test
// suite up to the documented resolution rather than trusted.
class DigitTable {
 public:
  // Built-in table covering `dims` dimensions (1..10).
  static DigitTable builtin(int dims);

  // Plain-text file: one dimension per line,
  //   <dimension index> <degree> <polynomial code> <m_1> ... <m_degree>
  // for dimensions >= 2 (dimension 1 is always van der Corput). Lines not
  // starting with a digit are skipped. `dims` = 0 loads every row present.
  static DigitTable load_file(const std::string& path, int dims = 0);

  int dimensions() const { return static_cast<int>(rows_.size()); }
  // Declared quality t of the first `dims` coordinates.
  int declared_t(int dims) const;
  // Largest m the shipped table is verified at by the net checker.
  static constexpr int max_verified_resolution() { return 8; }

  // n-th point, coordinate `dim` (1-based), as a 53-bit integer numerator;
  // the coordinate value is raw_bits * 2^-53.
  std::uint64_t raw_bits(std::uint64_t n, int dim) const;
  double coordinate(std::uint64_t n, int dim) const;

 private:
  DigitTable() = default;
  void append_row(int dim_index, int degree, std::uint64_t poly,
                  const std::vector<std::uint64_t>& m_init);
  // Direction numbers v_k scaled so v_k = m_k * 2^(53-k), k = 1..53.
  std::vector<std::array<std::uint64_t, kDigitCapacity>> rows_;
};

// First `dims` coordinates of the n-th point of the deterministic sequence.
std::vector<double> ts_point(const DigitTable& table, std::uint64_t n,
                             int dims);

// Keep the first R base-b digits of u and replace the remainder by
// b^-R * noise. R = 0 returns the noise; R = infinity returns u unchanged.
double truncate_randomize(double u, Randomness level, int base, double noise);
std::vector<double> truncate_randomize(const std::vector<double>& u,
                                       Randomness level, int base,
                                       const std::vector<double>& noise);

// Stateless counter-based uniform on [0,1) keyed by (seed, step index,
// coordinate index); 53 significant bits.
double uniform_noise(std::uint64_t seed, std::uint64_t n,
                     std::uint32_t coordinate);

// ---------------------------------------------------------------------------
// Equidistribution checking.

struct NetParams {
  int base = 2;
  int t = 0;
  int m = 0;
  int s = 1;
};

struct NetViolation {
  std::vector<int> shape;          // digit counts d_1..d_s, sum = m - t
  std::vector<std::uint64_t> box;  // box index per coordinate
  std::uint64_t count = 0;
  std::uint64_t expected = 0;
};

struct NetCheckResult {
  bool pass = false;
  std::optional<NetViolation> violation;
};

// Exact box-counting check that `points` (exactly b^m of them) form a
// (t,m,s)-net in base b: every b-ary box of volume b^(t-m) holds b^t points.
NetCheckResult verify_net(const std::vector<std::vector<double>>& points,
                          const NetParams& params);

// ---------------------------------------------------------------------------
// Index sequences controlling kernel adaptation.

struct BlockIndices {
  int k = 0;                         // b^(k-1) <= n < b^k
  std::optional<std::uint64_t> r;    // (r-1)*b^(dR+t) <= n < r*b^(dR+t);
                                     // empty when R is infinite
};

BlockIndices block_indices(std::uint64_t n, int base, int dim,
                           Randomness level, int quality);

// Ascending list of all adaptation boundaries <= limit: the first element is
// 1, and each subsequent element is the smallest value of
// min(b^{k_n}, r_n * b^{dR+t}) over n >= 1 exceeding its predecessor.
// Requires finite R.
std::vector<std::uint64_t> adaptation_boundaries(int base, int dim,
                                                 Randomness level, int quality,
                                                 std::uint64_t limit);

// ---------------------------------------------------------------------------
// Acceptance-coordinate lower bound.

struct AcceptanceFloorReport {
  bool pass = false;
  // Last index at which the bound was violated (0 when none were).
  std::uint64_t burn_in = 0;
  // First violation past the tolerated burn-in window, when failing.
  std::optional<std::uint64_t> violation;
};

// Verifies the lower bound on the acceptance coordinate stream u^n built
// from the radical inverse in `base`:
//   R infinite: u^n >= b^-k_n (exact, any violation fails);
//   R finite:   u^n >= n^-(1+alpha) for all n past a reported burn-in;
//               violations in the second half of the horizon fail.
AcceptanceFloorReport check_acceptance_floor(int base, Randomness level,
                                             std::uint64_t horizon,
                                             double alpha, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Driver.

struct DriverConfig {
  int base = 2;
  int dim = 1;       // number of proposal coordinates d
  int quality = -1;  // t of the underlying (t,d)-sequence; -1 = table default
  Randomness level = Randomness::infinite();
  std::uint64_t seed = 0;
};

struct DriverPoint {
  std::vector<double> proposal;  // d coordinates in [0,1)
  double accept = 0.0;
};

// Streams (t,d)_R proposal coordinates (table dims 1..d) plus a randomized
// radical-inverse acceptance coordinate. Index 0 is reserved (its
// deterministic point is the origin); next() starts at n = 1. Not
// thread-safe; use one driver per chain.
class SequenceDriver {
 public:
  SequenceDriver(DigitTable table, DriverConfig cfg);

  DriverPoint next();
  std::uint64_t next_index() const { return next_n_; }
  const DriverConfig& config() const { return cfg_; }

  // Noise-free underlying point u_inf^n (tests / diagnostics).
  DriverPoint deterministic_point(std::uint64_t n) const;

 private:
  DriverPoint point_at(std::uint64_t n) const;
  DigitTable table_;
  DriverConfig cfg_;
  std::uint64_t next_n_ = 1;
};

}  // namespace tsr
