#pragma once

#include <cstdint>
#include <vector>

#include "qdi/discord.hpp"

namespace qdi {

// Moments measured when the copies fed to the boxes come from two different
// sources: m1' uses the pair (left, right), m2' the four-tuple
// (left, right, left, right).  The spectral-moment identities do not hold
// for these values, so they are returned unvalidated.
Moments mismatch_moments(const TwoQubitState& left, const TwoQubitState& right,
                         Side side);

struct MismatchResult {
  double q_prime = 0.0;     // Q formula evaluated on the mismatched moments
  double q_exact = 0.0;     // Q of the even source mixture (left + right)/2
  double fidelity = 0.0;
  double delta = 0.0;       // |q_prime - q_exact|
  bool radicand_clamped = false;
};

MismatchResult mismatch_q(const TwoQubitState& left, const TwoQubitState& right);

struct RobustnessSummary {
  std::uint64_t n_pairs = 0;
  double f_min = 0.0;
  double max_delta = 0.0;
  std::uint64_t clamped_count = 0;
  // counts of delta in 50 equal bins of width histogram_bin_width, the last
  // bin also collecting overflow
  static constexpr int kHistogramBins = 50;
  double histogram_bin_width = 0.002;
  std::vector<std::uint64_t> histogram;
};

struct RobustnessRow {
  double q_exact = 0.0;
  double q_prime = 0.0;
  double fidelity = 0.0;
};

struct RobustnessResult {
  RobustnessSummary summary;
  std::vector<RobustnessRow> rows;
};

// Samples n_pairs fidelity-constrained source pairs and evaluates the
// mismatched Q against the exact one.  Row i depends only on (seed, i).
RobustnessResult robustness_sweep(std::uint64_t n_pairs, double f_min,
                                  std::uint64_t seed, unsigned n_threads = 0);

}  // namespace qdi
