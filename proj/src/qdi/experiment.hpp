#pragma once

#include <cstdint>
#include <vector>

#include "qdi/discord.hpp"
#include "qdi/optics.hpp"

namespace qdi {

enum class DelayScheme { Deterministic, Probabilistic };

// Knobs of the pulsed two-photon coincidence experiment.  Rates are per
// laser pulse; tau_ns is the pulse period.
struct ExperimentConfig {
  double eta = 0.75;                 // detector efficiency
  double tau_ns = 50.0;              // pulse period (20 MHz repetition)
  DelayScheme delay_scheme = DelayScheme::Probabilistic;
  double delay_success_p = 0.25;     // per-copy success of the passive delay
  double pair_gen_prob = 0.1;        // one photon pair per pulse
  double two_pair_prob = 0.01;       // two pairs from neighbouring pulses
  double pulse_pick_factor = 0.5;    // four-copy pulse pattern acceptance
  std::uint64_t iterations = 1000000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_success = 0;  // identity-pattern coincidences (the ratio denominator)
  std::uint64_t n_total = 0;
};

struct QEstimate {
  double q = 0.0;
  double std_error = 0.0;
  MomentEstimate m1;
  MomentEstimate m2;
};

struct ThroughputReport {
  double rate_m1_hz = 0.0;
  double rate_m2_hz_prob = 0.0;
  double rate_m2_hz_det = 0.0;
  double t_m1_s = 0.0, t_m2_s = 0.0;      // time to n_target events, scheme-selected
  double t_m1_tau = 0.0, t_m2_tau = 0.0;  // same in pulse-period units
  double p1 = 0.0;                        // two-copy coincidence prob per pulse
  double p2_default = 0.0, p2_strict = 0.0;
  bool strict = false;
  DelayScheme scheme = DelayScheme::Probabilistic;
  std::uint64_t n_target = 0;
};

// Monte Carlo run of the two-copy (m1) or four-copy (m2) coincidence
// experiment.  Each iteration draws a joint reading of all boxes from the
// exact outcome distribution of the optical model at config.eta; the moment
// is the ratio estimator  sum(products) / #(identity coincidences).
// Throws InsufficientStatistics when no identity coincidence occurred.
MomentEstimate estimate_m1(const TwoQubitState& s, const ExperimentConfig& cfg,
                           Side side = Side::A);
MomentEstimate estimate_m2(const TwoQubitState& s, const ExperimentConfig& cfg,
                           Side side = Side::A);

// Q from the two moment runs, with a bootstrap (200 resamples of the joint
// outcome counts) standard error.  The radicand of the Q formula is clamped
// at zero for noisy estimates.
QEstimate estimate_q(const TwoQubitState& s, const ExperimentConfig& cfg,
                     Side side = Side::A);

ThroughputReport throughput(const ExperimentConfig& cfg, std::uint64_t n_target,
                            bool strict);

}  // namespace qdi
