#include "qdi/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "qdi/errors.hpp"
#include "qdi/parallel.hpp"

namespace qdi {

Moments mismatch_moments(const TwoQubitState& left, const TwoQubitState& right,
                         Side side) {
  const MatX w2 = kron(left.rho(), right.rho());
  Moments m;
  m.side = side;
  m.m1 = real_trace_product(multicopy_m1_operator(side), w2);
  const MatX w4 = kron(w2, w2);  // copy order left, right, left, right
  m.m2 = real_trace_product(multicopy_m2_operator(side), w4);
  return m;
}

MismatchResult mismatch_q(const TwoQubitState& left, const TwoQubitState& right) {
  const Moments mm = mismatch_moments(left, right, Side::A);
  MismatchResult res;
  double radicand = 6.0 * mm.m2 - 2.0 * mm.m1 * mm.m1;
  if (radicand < 0.0) {
    radicand = 0.0;
    res.radicand_clamped = true;
  }
  res.q_prime = (2.0 * mm.m1 - std::sqrt(radicand)) / 12.0;

  const TwoQubitState mixture =
      TwoQubitState::from_matrix(0.5 * (left.rho() + right.rho()));
  res.q_exact = q_indicator(moments_from_k(k_matrix(mixture.bloch(), Side::A)));
  res.fidelity = qdi::fidelity(left, right);
  res.delta = std::abs(res.q_prime - res.q_exact);
  return res;
}

RobustnessResult robustness_sweep(std::uint64_t n_pairs, double f_min,
                                  std::uint64_t seed, unsigned n_threads) {
  if (n_pairs == 0)
    raise(ErrorKind::InvalidArgument, "n_pairs must be at least 1");
  if (!(f_min > 0.0 && f_min < 1.0))
    raise(ErrorKind::InvalidArgument, "f_min must lie strictly inside (0, 1)");

  RobustnessResult out;
  out.rows.resize(n_pairs);
  std::vector<std::uint8_t> clamped(n_pairs, 0);
  std::vector<double> delta(n_pairs, 0.0);
  parallel_for(
      n_pairs,
      [&](std::uint64_t i) {
        const auto [left, right] =
            random_state_pair_with_fidelity(seed, i, f_min);
        const MismatchResult r = mismatch_q(left, right);
        out.rows[i] = {r.q_exact, r.q_prime, r.fidelity};
        clamped[i] = r.radicand_clamped ? 1 : 0;
        delta[i] = r.delta;
      },
      n_threads);

  RobustnessSummary& s = out.summary;
  s.n_pairs = n_pairs;
  s.f_min = f_min;
  s.histogram.assign(RobustnessSummary::kHistogramBins, 0);
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    s.max_delta = std::max(s.max_delta, delta[i]);
    s.clamped_count += clamped[i];
    const auto bin = std::min<std::size_t>(
        static_cast<std::size_t>(delta[i] / s.histogram_bin_width),
        RobustnessSummary::kHistogramBins - 1);
    ++s.histogram[bin];
  }
  return out;
}

}  // namespace qdi
