#include "qdi/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qdi/errors.hpp"
#include "qdi/rng.hpp"

namespace qdi {

namespace {

constexpr std::uint64_t kTagBootstrap = 0x62747374ull;
constexpr int kBootstrapResamples = 200;

void require(bool ok, const char* what) {
  if (!ok) raise(ErrorKind::InvalidArgument, what);
}

// Joint distribution over the readings of all boxes of one run.  Categories
// carry the product value a_n and whether the reading is the identity
// pattern (every box an outer coincidence).
struct OutcomeModel {
  std::vector<double> cumulative;
  std::vector<double> value;
  std::vector<std::uint8_t> identity;
};

std::array<Mat4, 3> box_elements(double eta) {
  const auto [e14, e23] = reconstruct_coincidence_operators(DetectorModel{eta});
  const Mat4 other = Mat4::Identity() - e14 - e23;
  return {e14, e23, other};
}

double element_value(int element, BoxKind kind) {
  switch (element) {
    case 0: return kind == BoxKind::U ? 1.0 : 2.0;  // outer coincidence
    case 1: return -4.0;                            // inner coincidence
    default: return 0.0;
  }
}

OutcomeModel build_model(const TwoQubitState& s, double eta, Side side,
                         bool four_copies) {
  const std::array<Mat4, 3> povm = box_elements(eta);
  const MatX w2 = kron(s.rho(), s.rho());
  const MatX w = four_copies ? MatX(kron(w2, w2)) : w2;
  const int n_qubits = four_copies ? 8 : 4;

  // qubit slots of each box, interleaved copy order A1 B1 A2 B2 (A3 B3 A4 B4);
  // the measured side hosts the U boxes, the opposite side the V boxes
  struct BoxSlot {
    int q1, q2;
    BoxKind kind;
  };
  std::vector<BoxSlot> boxes;
  if (four_copies) {
    boxes = {{0, 6, BoxKind::U}, {2, 4, BoxKind::U},
             {1, 3, BoxKind::V}, {5, 7, BoxKind::V}};
  } else {
    boxes = {{0, 2, BoxKind::U}, {1, 3, BoxKind::V}};
  }
  if (side == Side::B) {
    for (auto& b : boxes) b.kind = (b.kind == BoxKind::U) ? BoxKind::V : BoxKind::U;
  }

  OutcomeModel model;
  const std::size_t n_cat =
      four_copies ? std::size_t{81} : std::size_t{9};
  model.cumulative.reserve(n_cat);
  model.value.reserve(n_cat);
  model.identity.reserve(n_cat);

  double running = 0.0;
  std::vector<int> elem(boxes.size(), 0);
  for (std::size_t cat = 0; cat < n_cat; ++cat) {
    std::size_t rem = cat;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      elem[b] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    std::vector<std::tuple<Mat4, int, int>> factors;
    factors.reserve(boxes.size());
    double value = 1.0;
    bool identity = true;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      factors.emplace_back(povm[static_cast<std::size_t>(elem[b])], boxes[b].q1,
                           boxes[b].q2);
      value *= element_value(elem[b], boxes[b].kind);
      identity = identity && (elem[b] == 0);
    }
    const MatX op = embedded_pair_product(factors, n_qubits);
    const Complex tr = (op.transpose().cwiseProduct(w)).sum();
    const double p = std::clamp(tr.real(), 0.0, 1.0);
    running += p;
    model.cumulative.push_back(running);
    model.value.push_back(value);
    model.identity.push_back(identity ? 1 : 0);
  }
  // rounding can leave the total a hair off 1; pin the last edge
  if (!model.cumulative.empty())
    model.cumulative.back() = std::max(model.cumulative.back(), 1.0);
  return model;
}

std::size_t draw_category(const OutcomeModel& model, double u) {
  const auto it = std::upper_bound(model.cumulative.begin(),
                                   model.cumulative.end(), u);
  return std::min<std::size_t>(
      static_cast<std::size_t>(it - model.cumulative.begin()),
      model.cumulative.size() - 1);
}

struct RunCounts {
  std::vector<std::uint64_t> category;  // per model category
  std::uint64_t delay_failures = 0;     // four-copy probabilistic scheme only
  std::uint64_t n_total = 0;
};

RunCounts run_counts(const OutcomeModel& model, const ExperimentConfig& cfg,
                     bool four_copies) {
  RunCounts counts;
  counts.category.assign(model.cumulative.size(), 0);
  counts.n_total = cfg.iterations;
  const bool gated = four_copies &&
                     cfg.delay_scheme == DelayScheme::Probabilistic;
  const double p_delay = cfg.delay_success_p * cfg.delay_success_p;
  for (std::uint64_t i = 0; i < cfg.iterations; ++i) {
    Rng rng = Rng::substream(cfg.seed, i);
    if (gated && rng.uniform() >= p_delay) {
      ++counts.delay_failures;
      continue;
    }
    ++counts.category[draw_category(model, rng.uniform())];
  }
  return counts;
}

MomentEstimate estimate_from_counts(const OutcomeModel& model,
                                    const RunCounts& counts) {
  double sum = 0.0;
  std::uint64_t n_success = 0;
  for (std::size_t c = 0; c < counts.category.size(); ++c) {
    sum += static_cast<double>(counts.category[c]) * model.value[c];
    if (model.identity[c]) n_success += counts.category[c];
  }
  if (n_success == 0)
    raise(ErrorKind::InsufficientStatistics,
          "no identity coincidence was recorded; increase iterations or eta");

  MomentEstimate est;
  est.value = sum / static_cast<double>(n_success);
  est.n_success = n_success;
  est.n_total = counts.n_total;

  // ratio-estimator error: per-event residual z = a - value * [identity]
  double ss = 0.0;
  for (std::size_t c = 0; c < counts.category.size(); ++c) {
    const double z = model.value[c] - est.value * (model.identity[c] ? 1.0 : 0.0);
    ss += static_cast<double>(counts.category[c]) * z * z;
  }
  const double n = static_cast<double>(counts.n_total);
  const double bessel = n > 1.5 ? n / (n - 1.0) : 1.0;
  est.std_error = std::sqrt(ss * bessel) / static_cast<double>(n_success);
  return est;
}

MomentEstimate run_moment(const TwoQubitState& s, const ExperimentConfig& cfg,
                          Side side, bool four_copies) {
  cfg.validate();
  const OutcomeModel model = build_model(s, cfg.eta, side, four_copies);
  const RunCounts counts = run_counts(model, cfg, four_copies);
  return estimate_from_counts(model, counts);
}

double q_from_moments(double m1, double m2) {
  const double radicand = std::max(0.0, 6.0 * m2 - 2.0 * m1 * m1);
  return (2.0 * m1 - std::sqrt(radicand)) / 12.0;
}

// Multinomial resample of observed category counts: every category except the
// heaviest is drawn as a chained conditional binomial, the heaviest takes the
// remainder (keeps the waiting-time sampler cost proportional to the light
// tail, not to n).
std::vector<std::uint64_t> resample_counts(const std::vector<std::uint64_t>& counts,
                                           std::uint64_t n, Rng& rng) {
  std::vector<std::uint64_t> out(counts.size(), 0);
  if (n == 0) return out;
  std::size_t heaviest = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[heaviest]) heaviest = c;

  std::uint64_t remaining_n = n;
  double remaining_p = 1.0;
  const double total = static_cast<double>(n);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (c == heaviest) continue;
    if (remaining_n == 0) break;
    const double pc = static_cast<double>(counts[c]) / total;
    if (pc <= 0.0) continue;
    const double cond = std::clamp(pc / remaining_p, 0.0, 1.0);
    const std::uint64_t k = rng.binomial(remaining_n, cond);
    out[c] = k;
    remaining_n -= k;
    remaining_p = std::max(remaining_p - pc, 1e-300);
  }
  out[heaviest] = remaining_n;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  require(tau_ns > 0.0, "tau_ns must be positive");
  require(delay_success_p > 0.0 && delay_success_p <= 1.0,
          "delay_success_p must lie in (0, 1]");
  require(pair_gen_prob > 0.0 && pair_gen_prob <= 1.0,
          "pair_gen_prob must lie in (0, 1]");
  require(two_pair_prob > 0.0 && two_pair_prob <= 1.0,
          "two_pair_prob must lie in (0, 1]");
  require(pulse_pick_factor > 0.0 && pulse_pick_factor <= 1.0,
          "pulse_pick_factor must lie in (0, 1]");
  require(iterations >= 1, "iterations must be at least 1");
}

MomentEstimate estimate_m1(const TwoQubitState& s, const ExperimentConfig& cfg,
                           Side side) {
  return run_moment(s, cfg, side, false);
}

MomentEstimate estimate_m2(const TwoQubitState& s, const ExperimentConfig& cfg,
                           Side side) {
  return run_moment(s, cfg, side, true);
}

QEstimate estimate_q(const TwoQubitState& s, const ExperimentConfig& cfg,
                     Side side) {
  cfg.validate();
  const OutcomeModel model1 = build_model(s, cfg.eta, side, false);
  const OutcomeModel model2 = build_model(s, cfg.eta, side, true);
  const RunCounts counts1 = run_counts(model1, cfg, false);
  const RunCounts counts2 = run_counts(model2, cfg, true);

  QEstimate est;
  est.m1 = estimate_from_counts(model1, counts1);
  est.m2 = estimate_from_counts(model2, counts2);
  est.q = q_from_moments(est.m1.value, est.m2.value);

  // bootstrap over the joint category counts of both runs
  std::vector<double> q_samples;
  q_samples.reserve(kBootstrapResamples);
  // the gated run resamples over categories plus the delay-failure bucket
  std::vector<std::uint64_t> counts2_ext = counts2.category;
  counts2_ext.push_back(counts2.delay_failures);
  for (int b = 0; b < kBootstrapResamples; ++b) {
    Rng rng = Rng::substream(cfg.seed ^ kTagBootstrap,
                             static_cast<std::uint64_t>(b));
    const auto r1 = resample_counts(counts1.category, counts1.n_total, rng);
    const auto r2 = resample_counts(counts2_ext, counts2.n_total, rng);

    double sum1 = 0.0, sum2 = 0.0;
    std::uint64_t n1 = 0, n2 = 0;
    for (std::size_t c = 0; c < r1.size(); ++c) {
      sum1 += static_cast<double>(r1[c]) * model1.value[c];
      if (model1.identity[c]) n1 += r1[c];
    }
    for (std::size_t c = 0; c + 1 < r2.size(); ++c) {
      sum2 += static_cast<double>(r2[c]) * model2.value[c];
      if (model2.identity[c]) n2 += r2[c];
    }
    if (n1 == 0 || n2 == 0) continue;
    q_samples.push_back(q_from_moments(sum1 / static_cast<double>(n1),
                                       sum2 / static_cast<double>(n2)));
  }
  if (q_samples.size() < static_cast<std::size_t>(kBootstrapResamples / 2))
    raise(ErrorKind::InsufficientStatistics,
          "too few usable bootstrap resamples for a Q error bar");

  double mean = 0.0;
  for (double q : q_samples) mean += q;
  mean /= static_cast<double>(q_samples.size());
  double var = 0.0;
  for (double q : q_samples) var += (q - mean) * (q - mean);
  var /= static_cast<double>(q_samples.size() - 1);
  est.std_error = std::sqrt(var);
  return est;
}

ThroughputReport throughput(const ExperimentConfig& cfg, std::uint64_t n_target,
                            bool strict) {
  cfg.validate();
  require(n_target >= 1, "n_target must be at least 1");

  ThroughputReport rep;
  rep.strict = strict;
  rep.scheme = cfg.delay_scheme;
  rep.n_target = n_target;

  const double rep_rate_hz = 1e9 / cfg.tau_ns;
  const double single_rate = cfg.eta * cfg.eta / 2.0;  // two-copy coincidence per pair
  rep.p1 = single_rate * single_rate * cfg.two_pair_prob;
  rep.p2_default = rep.p1 * rep.p1 * cfg.pulse_pick_factor;
  rep.p2_strict =
      rep.p2_default * cfg.delay_success_p * cfg.delay_success_p;

  const double p2 = strict ? rep.p2_strict : rep.p2_default;
  rep.rate_m1_hz = rep.p1 * rep_rate_hz;
  rep.rate_m2_hz_prob = p2 * rep_rate_hz;
  rep.rate_m2_hz_det = rep.rate_m2_hz_prob * 2.0 /
                       (cfg.delay_success_p * cfg.delay_success_p);

  const double rate_m2 = cfg.delay_scheme == DelayScheme::Deterministic
                             ? rep.rate_m2_hz_det
                             : rep.rate_m2_hz_prob;
  const double n = static_cast<double>(n_target);
  rep.t_m1_s = n / rep.rate_m1_hz;
  rep.t_m2_s = n / rate_m2;
  rep.t_m1_tau = rep.t_m1_s * rep_rate_hz;
  rep.t_m2_tau = rep.t_m2_s * rep_rate_hz;
  return rep;
}

}  // namespace qdi
