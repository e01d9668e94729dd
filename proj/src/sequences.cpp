#include "tsr/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsr {

namespace {

constexpr std::uint64_t kBitsField = (std::uint64_t{1} << kDigitCapacity) - 1;
constexpr double kScale53 = 0x1.0p-53;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// 53-bit noise word keyed by (seed, step, coordinate).
std::uint64_t noise_bits(std::uint64_t seed, std::uint64_t n,
                         std::uint32_t coordinate) {
  std::uint64_t h = mix64(seed ^ 0x9E3779B97F4A7C15ull);
  h = mix64(h ^ (0xD1B54A32D192ED03ull * (n + 1)));
  h = mix64(h ^ (0x9E3779B97F4A7C15ull * (std::uint64_t{coordinate} + 1)));
  return h >> 11;
}

// Bit reversal of n across the binary point, as a 53-bit numerator.
std::uint64_t van_der_corput_bits(std::uint64_t n) {
  if (n >> kDigitCapacity) {
    throw std::overflow_error(
        "sequence index exceeds the 53-digit base-2 resolution");
  }
  std::uint64_t bits = 0;
  for (int k = 0; n != 0; ++k, n >>= 1) {
    if (n & 1) bits |= std::uint64_t{1} << (kDigitCapacity - 1 - k);
  }
  return bits;
}

// b^e as uint64, throwing std::overflow_error past 2^63.
std::uint64_t checked_pow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::numeric_limits<std::uint64_t>::max() >> 1) / b) {
      throw std::overflow_error("digit expansion overflows 64-bit range");
    }
    r *= b;
  }
  return r;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Randomness

Randomness Randomness::finite(int r) {
  require(r >= 0, "randomization level must be non-negative");
  return Randomness(r);
}

Randomness Randomness::infinite() { return Randomness(-1); }

Randomness Randomness::parse(const std::string& text) {
  if (text == "inf") return infinite();
  std::size_t pos = 0;
  long long v = -1;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("randomization level must be an integer or 'inf'");
  }
  require(pos == text.size() && v >= 0,
          "randomization level must be a non-negative integer or 'inf'");
  return finite(static_cast<int>(v));
}

int Randomness::value() const {
  if (is_infinite()) {
    throw std::logic_error("randomization level is infinite");
  }
  return r_;
}

std::string Randomness::str() const {
  return is_infinite() ? "inf" : std::to_string(r_);
}

// ---------------------------------------------------------------------------
// Radical inverse

double radical_inverse(std::uint64_t n, int base) {
  require(base >= 2, "base must be at least 2");
  const double inv_base = 1.0 / base;
  double f = inv_base;
  double r = 0.0;
  while (n != 0) {
    r += static_cast<double>(n % static_cast<std::uint64_t>(base)) * f;
    n /= static_cast<std::uint64_t>(base);
    f *= inv_base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// DigitTable

namespace {

struct BuiltinRow {
  int degree;
  std::uint64_t poly;
  std::uint64_t m[8];
};

// Primitive-polynomial direction integers for dimensions 2..10 (dimension 1
// is van der Corput). Classic values from the standard Sobol tables.
constexpr BuiltinRow kBuiltinRows[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
};

// Declared quality of the first s coordinates, s = 1..10. Verified for
// s <= 5 by verify_net up to m = max_verified_resolution() in the test suite.
constexpr int kDeclaredT[] = {0, 0, 1, 3, 5, 8, 11, 15, 19, 23};

constexpr int kBuiltinDims = 1 + static_cast<int>(std::size(kBuiltinRows));

}  // namespace

void DigitTable::append_row(int dim_index, int degree, std::uint64_t poly,
                            const std::vector<std::uint64_t>& m_init) {
  require(dim_index == dimensions() + 1,
          "direction-number rows must cover dimensions contiguously");
  std::array<std::uint64_t, kDigitCapacity> v{};
  if (dim_index == 1) {
    // Van der Corput: every direction integer is 1.
    for (int k = 0; k < kDigitCapacity; ++k) {
      v[k] = std::uint64_t{1} << (kDigitCapacity - 1 - k);
    }
    rows_.push_back(v);
    return;
  }
  require(degree >= 1 && degree <= 20, "polynomial degree out of range");
  require(static_cast<int>(m_init.size()) == degree,
          "need exactly <degree> initial direction integers");
  require(degree == 1 ? poly == 0 : poly < (std::uint64_t{1} << (degree - 1)),
          "polynomial code out of range for its degree");
  std::vector<std::uint64_t> m(kDigitCapacity, 0);
  for (int k = 0; k < degree; ++k) {
    require((m_init[k] & 1) != 0, "direction integers must be odd");
    require(m_init[k] < (std::uint64_t{1} << (k + 1)),
            "direction integer m_k must be below 2^k");
    m[k] = m_init[k];
  }
  for (int k = degree; k < kDigitCapacity; ++k) {
    std::uint64_t val = m[k - degree] ^ (m[k - degree] << degree);
    for (int i = 1; i < degree; ++i) {
      if ((poly >> (degree - 1 - i)) & 1) val ^= m[k - i] << i;
    }
    m[k] = val;
  }
  for (int k = 0; k < kDigitCapacity; ++k) {
    v[k] = m[k] << (kDigitCapacity - 1 - k);
  }
  rows_.push_back(v);
}

DigitTable DigitTable::builtin(int dims) {
  require(dims >= 1 && dims <= kBuiltinDims,
          "built-in table covers dimensions 1..10");
  DigitTable t;
  t.append_row(1, 0, 0, {});
  for (int d = 2; d <= dims; ++d) {
    const BuiltinRow& row = kBuiltinRows[d - 2];
    std::vector<std::uint64_t> m(row.m, row.m + row.degree);
    t.append_row(d, row.degree, row.poly, m);
  }
  return t;
}

DigitTable DigitTable::load_file(const std::string& path, int dims) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction-number file: " + path);
  DigitTable t;
  t.append_row(1, 0, 0, {});
  std::string line;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (!std::isdigit(static_cast<unsigned char>(line[first]))) continue;
    std::istringstream ls(line);
    long long dim_index = 0, degree = 0;
    std::uint64_t poly = 0;
    if (!(ls >> dim_index >> degree >> poly)) {
      throw std::runtime_error("malformed direction-number row: " + line);
    }
    std::vector<std::uint64_t> m;
    std::uint64_t mk = 0;
    while (ls >> mk) m.push_back(mk);
    if (static_cast<long long>(m.size()) != degree) {
      throw std::runtime_error("direction-number row has wrong count: " + line);
    }
    t.append_row(static_cast<int>(dim_index), static_cast<int>(degree), poly, m);
    if (dims > 0 && t.dimensions() == dims) break;
  }
  if (dims > 0 && t.dimensions() != dims) {
    throw std::runtime_error("direction-number file has too few dimensions");
  }
  return t;
}

int DigitTable::declared_t(int dims) const {
  require(dims >= 1 && dims <= dimensions(), "dimension count out of range");
  if (dims <= static_cast<int>(std::size(kDeclaredT))) return kDeclaredT[dims - 1];
  return kDeclaredT[std::size(kDeclaredT) - 1];
}

std::uint64_t DigitTable::raw_bits(std::uint64_t n, int dim) const {
  require(dim >= 1 && dim <= dimensions(), "dimension out of range");
  if (n >> kDigitCapacity) {
    throw std::overflow_error(
        "sequence index exceeds the 53-digit base-2 resolution");
  }
  const auto& v = rows_[dim - 1];
  std::uint64_t bits = 0;
  for (int k = 0; n != 0; ++k, n >>= 1) {
    if (n & 1) bits ^= v[k];
  }
  return bits;
}

double DigitTable::coordinate(std::uint64_t n, int dim) const {
  return static_cast<double>(raw_bits(n, dim)) * kScale53;
}

std::vector<double> ts_point(const DigitTable& table, std::uint64_t n,
                             int dims) {
  require(dims >= 1 && dims <= table.dimensions(),
          "requested more coordinates than the table provides");
  std::vector<double> p(dims);
  for (int j = 0; j < dims; ++j) p[j] = table.coordinate(n, j + 1);
  return p;
}

// ---------------------------------------------------------------------------
// Truncation / randomization

double truncate_randomize(double u, Randomness level, int base, double noise) {
  require(base >= 2, "base must be at least 2");
  require(u >= 0.0 && u < 1.0, "deterministic coordinate must lie in [0,1)");
  require(noise >= 0.0 && noise < 1.0, "noise must lie in [0,1)");
  if (level.is_infinite()) return u;
  const int R = level.value();
  if (R == 0) return noise;
  const std::uint64_t bR = checked_pow(static_cast<std::uint64_t>(base), R);
  if (bR > (std::uint64_t{1} << kDigitCapacity)) {
    throw std::overflow_error("kept digits exceed the 53-bit capacity");
  }
  const double scale = static_cast<double>(bR);
  const double prefix = std::floor(u * scale) / scale;
  return prefix + noise / scale;
}

std::vector<double> truncate_randomize(const std::vector<double>& u,
                                       Randomness level, int base,
                                       const std::vector<double>& noise) {
  require(u.size() == noise.size(),
          "need one noise value per coordinate");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = truncate_randomize(u[i], level, base, noise[i]);
  }
  return out;
}

double uniform_noise(std::uint64_t seed, std::uint64_t n,
                     std::uint32_t coordinate) {
  return static_cast<double>(noise_bits(seed, n, coordinate)) * kScale53;
}

// ---------------------------------------------------------------------------
// Net verification

NetCheckResult verify_net(const std::vector<std::vector<double>>& points,
                          const NetParams& params) {
  require(params.base >= 2, "base must be at least 2");
  require(params.s >= 1, "need at least one coordinate");
  require(params.m >= 0 && params.t >= 0 && params.t <= params.m,
          "need 0 <= t <= m");
  const std::uint64_t b = static_cast<std::uint64_t>(params.base);
  const std::uint64_t want_points = checked_pow(b, params.m);
  require(points.size() == want_points,
          "a (t,m,s)-net check needs exactly b^m points");
  const std::uint64_t expected = checked_pow(b, params.t);
  for (const auto& p : points) {
    require(static_cast<int>(p.size()) == params.s,
            "point dimension does not match s");
    for (double c : p) require(c >= 0.0 && c < 1.0, "coordinates must lie in [0,1)");
  }

  const int digits = params.m - params.t;
  std::vector<int> shape(params.s, 0);
  shape[0] = digits;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> box_digits(params.s);
  while (true) {
    // Count points per b-ary box of this shape.
    const std::uint64_t num_boxes = checked_pow(b, digits);
    counts.assign(num_boxes, 0);
    std::vector<double> radix(params.s);
    for (int j = 0; j < params.s; ++j) {
      radix[j] = static_cast<double>(checked_pow(b, shape[j]));
    }
    for (const auto& p : points) {
      std::uint64_t idx = 0;
      for (int j = 0; j < params.s; ++j) {
        auto a = static_cast<std::uint64_t>(p[j] * radix[j]);
        if (a >= static_cast<std::uint64_t>(radix[j])) {
          a = static_cast<std::uint64_t>(radix[j]) - 1;
        }
        idx = idx * static_cast<std::uint64_t>(radix[j]) + a;
      }
      counts[idx]++;
    }
    for (std::uint64_t idx = 0; idx < num_boxes; ++idx) {
      if (counts[idx] != expected) {
        NetViolation v;
        v.shape = shape;
        v.count = counts[idx];
        v.expected = expected;
        std::uint64_t rem = idx;
        v.box.assign(params.s, 0);
        for (int j = params.s - 1; j >= 0; --j) {
          const std::uint64_t r = checked_pow(b, shape[j]);
          v.box[j] = rem % r;
          rem /= r;
        }
        return {false, v};
      }
    }
    // Next composition of `digits` into s non-negative parts.
    int j = 0;
    while (j < params.s - 1 && shape[j] == 0) ++j;
    if (j == params.s - 1) break;
    const int head = shape[j];
    shape[j] = 0;
    shape[0] = head - 1;
    shape[j + 1] += 1;
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Block indices and adaptation boundaries

BlockIndices block_indices(std::uint64_t n, int base, int dim,
                           Randomness level, int quality) {
  require(n >= 1, "block indices are defined for n >= 1");
  require(base >= 2 && dim >= 1 && quality >= 0, "invalid block parameters");
  BlockIndices out;
  unsigned __int128 p = base;
  int k = 1;
  while (static_cast<unsigned __int128>(n) >= p) {
    p *= static_cast<unsigned>(base);
    ++k;
  }
  out.k = k;
  if (!level.is_infinite()) {
    const long long e =
        static_cast<long long>(dim) * level.value() + quality;
    unsigned __int128 block = 1;
    bool huge = false;
    for (long long i = 0; i < e; ++i) {
      block *= static_cast<unsigned>(base);
      if (block > static_cast<unsigned __int128>(
                      std::numeric_limits<std::uint64_t>::max())) {
        huge = true;
        break;
      }
    }
    out.r = huge ? 1
                 : n / static_cast<std::uint64_t>(block) + 1;
  }
  return out;
}

std::vector<std::uint64_t> adaptation_boundaries(int base, int dim,
                                                 Randomness level, int quality,
                                                 std::uint64_t limit) {
  require(!level.is_infinite(),
          "adaptation boundaries require a finite randomization level");
  require(base >= 2 && dim >= 1 && quality >= 0 && limit >= 1,
          "invalid boundary parameters");
  // The recursive definition reduces to {1} together with every power of the
  // base and every multiple of the block length b^(dR+t): each candidate
  // min(b^{k_n}, r_n b^{dR+t}) is one of those, and taking n = v-1 realizes
  // every such v.
  std::vector<std::uint64_t> out;
  out.push_back(1);
  for (unsigned __int128 p = static_cast<unsigned>(base);
       p <= static_cast<unsigned __int128>(limit);
       p *= static_cast<unsigned>(base)) {
    out.push_back(static_cast<std::uint64_t>(p));
  }
  const long long e = static_cast<long long>(dim) * level.value() + quality;
  unsigned __int128 block = 1;
  bool huge = false;
  for (long long i = 0; i < e; ++i) {
    block *= static_cast<unsigned>(base);
    if (block > static_cast<unsigned __int128>(limit)) {
      huge = true;
      break;
    }
  }
  if (!huge) {
    for (unsigned __int128 v = block;
         v <= static_cast<unsigned __int128>(limit); v += block) {
      out.push_back(static_cast<std::uint64_t>(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Acceptance-coordinate floor

AcceptanceFloorReport check_acceptance_floor(int base, Randomness level,
                                             std::uint64_t horizon,
                                             double alpha, std::uint64_t seed) {
  require(base >= 2 && horizon >= 1, "invalid floor-check parameters");
  AcceptanceFloorReport rep;
  if (level.is_infinite()) {
    // Deterministic bound u^n >= b^-k_n, evaluated with the same floating
    // accumulation as radical_inverse so the comparison is rounding-safe.
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      const double inv_base = 1.0 / base;
      double f = inv_base;
      double r = 0.0;
      double lead = 0.0;
      for (std::uint64_t v = n; v != 0; v /= static_cast<std::uint64_t>(base)) {
        r += static_cast<double>(v % static_cast<std::uint64_t>(base)) * f;
        lead = f;
        f *= inv_base;
      }
      if (r < lead) {
        rep.pass = false;
        rep.burn_in = n;
        rep.violation = n;
        return rep;
      }
    }
    rep.pass = true;
    rep.burn_in = 0;
    return rep;
  }
  require(alpha > 0.0, "alpha must be positive");
  std::uint64_t last_violation = 0;
  std::optional<std::uint64_t> first_late;
  const std::uint64_t tolerated = horizon / 2;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const double u = truncate_randomize(radical_inverse(n, base), level, base,
                                        uniform_noise(seed, n, 1));
    const double bound = std::pow(static_cast<double>(n), -(1.0 + alpha));
    if (u < bound) {
      last_violation = n;
      if (n > tolerated && !first_late) first_late = n;
    }
  }
  rep.burn_in = last_violation;
  rep.pass = !first_late.has_value();
  rep.violation = first_late;
  return rep;
}

// ---------------------------------------------------------------------------
// SequenceDriver

SequenceDriver::SequenceDriver(DigitTable table, DriverConfig cfg)
    : table_(std::move(table)), cfg_(cfg) {
  require(cfg_.base == 2,
          "the digital construction is base 2; other bases are unsupported");
  require(cfg_.dim >= 1 && cfg_.dim <= table_.dimensions(),
          "driver dimension exceeds the digit table");
  if (!cfg_.level.is_infinite()) {
    require(cfg_.level.value() <= kDigitCapacity,
            "randomization level exceeds the 53-digit capacity");
  }
  if (cfg_.quality < 0) cfg_.quality = table_.declared_t(cfg_.dim);
}

DriverPoint SequenceDriver::point_at(std::uint64_t n) const {
  const int d = cfg_.dim;
  DriverPoint p;
  p.proposal.resize(d);
  if (cfg_.level.is_infinite()) {
    for (int j = 0; j < d; ++j) {
      p.proposal[j] = table_.coordinate(n, j + 1);
    }
    p.accept = static_cast<double>(van_der_corput_bits(n)) * kScale53;
    return p;
  }
  const int R = cfg_.level.value();
  const std::uint64_t keep_mask = (~std::uint64_t{0} << (kDigitCapacity - R)) &
                                  kBitsField;
  for (int j = 0; j < d; ++j) {
    const std::uint64_t det = table_.raw_bits(n, j + 1);
    const std::uint64_t noise = noise_bits(cfg_.seed, n,
                                           static_cast<std::uint32_t>(j + 1));
    p.proposal[j] =
        static_cast<double>((det & keep_mask) | (noise >> R)) * kScale53;
  }
  const std::uint64_t det = van_der_corput_bits(n);
  const std::uint64_t noise =
      noise_bits(cfg_.seed, n, static_cast<std::uint32_t>(d + 1));
  p.accept = static_cast<double>((det & keep_mask) | (noise >> R)) * kScale53;
  return p;
}

DriverPoint SequenceDriver::next() {
  DriverPoint p = point_at(next_n_);
  ++next_n_;
  return p;
}

DriverPoint SequenceDriver::deterministic_point(std::uint64_t n) const {
  const int d = cfg_.dim;
  DriverPoint p;
  p.proposal.resize(d);
  for (int j = 0; j < d; ++j) p.proposal[j] = table_.coordinate(n, j + 1);
  p.accept = static_cast<double>(van_der_corput_bits(n)) * kScale53;
  return p;
}

}  // namespace tsr
