#ifndef FELLBAND_COMMON_HPP
#define FELLBAND_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace fellband {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Error taxonomy shared by all modules.  Exit codes used by the CLI:
// tolerance failures map to 2, budget trips to 3, config problems to 4.
struct BudgetExceeded : std::runtime_error {
  std::size_t partial_count;
  explicit BudgetExceeded(const std::string& what, std::size_t partial = 0)
      : std::runtime_error(what), partial_count(partial) {}
};

struct NotGenerated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SystemMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToleranceNotMet : std::runtime_error {
  double achieved;
  ToleranceNotMet(const std::string& what, double got)
      : std::runtime_error(what), achieved(got) {}
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Diverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG (xoshiro256**, seeded via splitmix64).  std:: engines are
// portable but the distributions are not, so all sampling goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  Complex complex_gaussian() {
    return Complex(gaussian(), gaussian()) / std::sqrt(2.0);
  }

  // Independent child stream, for reproducible per-instance sampling.
  Rng fork(std::uint64_t tag) { return Rng(next_u64() ^ (tag * 0x9e3779b97f4a7c15ULL)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Least-squares line through (x_i, y_i); returns {slope, intercept, residual}
// where residual is the RMS deviation of y from the fit.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvalidSpec("fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  if (std::abs(denom) < 1e-300) {
    fit.slope = 0.0;
    fit.intercept = sy / static_cast<double>(n);
  } else {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

// Stable float formatting for reports; round-trips doubles exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace fellband

#endif
