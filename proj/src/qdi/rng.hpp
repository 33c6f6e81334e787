#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace qdi {

// SplitMix64 stream with counter-based substream derivation.  Element i of an
// ensemble is generated from substream(seed, i), so results do not depend on
// how the index range is split across threads.  All distribution transforms
// are implemented here (not via <random>) so that byte-identical output is
// reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(index * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; the second draw of each pair is cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  // Binomial(n, p) by waiting-time accumulation; cost O(n p), exact for the
  // edge cases p <= 0 and p >= 1.  Large p is handled via the complement so
  // the cost stays O(n min(p, 1-p)).
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    const double log_q = std::log1p(-p);
    std::uint64_t count = 0;
    double pos = 0.0;
    for (;;) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      pos += std::floor(std::log(u) / log_q) + 1.0;
      if (pos > static_cast<double>(n)) break;
      ++count;
    }
    return count;
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qdi
