#include "qdi.h"

#include <cstring>
#include <new>
#include <string>

#include "qdi/discord.hpp"
#include "qdi/errors.hpp"
#include "qdi/experiment.hpp"
#include "qdi/optics.hpp"
#include "qdi/robustness.hpp"
#include "qdi/serialize.hpp"
#include "qdi/state.hpp"
#include "qdi/version.hpp"

struct qdi_state {
  qdi::TwoQubitState value;
};

struct qdi_expconfig {
  qdi::ExperimentConfig value;
};

struct qdi_robustness_result {
  qdi::RobustnessResult value;
};

namespace {

thread_local std::string g_last_error;

int code_for(qdi::ErrorKind kind) {
  using qdi::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidState: return QDI_ERR_INVALID_STATE;
    case ErrorKind::NotAState: return QDI_ERR_INVALID_STATE;
    case ErrorKind::InvalidMoments: return QDI_ERR_INVALID_MOMENTS;
    case ErrorKind::UnknownMode: return QDI_ERR_UNKNOWN_MODE;
    case ErrorKind::SamplingExhausted: return QDI_ERR_SAMPLING_EXHAUSTED;
    case ErrorKind::InsufficientStatistics:
      return QDI_ERR_INSUFFICIENT_STATISTICS;
    case ErrorKind::Parse: return QDI_ERR_PARSE;
    case ErrorKind::Io: return QDI_ERR_IO;
    case ErrorKind::InvalidArgument: return QDI_ERR_INVALID_ARGUMENT;
    case ErrorKind::Internal: return QDI_ERR_INTERNAL;
  }
  return QDI_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return QDI_OK;
  } catch (const qdi::Error& e) {
    g_last_error = e.what();
    return code_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QDI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QDI_ERR_INTERNAL;
  }
}

int require_nonnull(const void* p) {
  if (p) return QDI_OK;
  g_last_error = "null pointer argument";
  return QDI_ERR_NULLPTR;
}

// variadic null check; returns nonzero on the first null
template <typename... Ptr>
int check_all(const Ptr*... ptrs) {
  int rc = QDI_OK;
  ((rc = rc == QDI_OK ? require_nonnull(ptrs) : rc), ...);
  return rc;
}

// copies text including the terminator; with a null buf only the required
// size is reported
int copy_string(const std::string& text, char* buf, size_t cap, size_t* len) {
  if (len) *len = text.size() + 1;
  if (!buf) {
    if (len) return QDI_OK;
    g_last_error = "null buffer";
    return QDI_ERR_NULLPTR;
  }
  if (cap < text.size() + 1) {
    g_last_error = "buffer holds " + std::to_string(cap) + " bytes, need " +
                   std::to_string(text.size() + 1);
    return QDI_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return QDI_OK;
}

qdi::Mat4 rho_from_arrays(const double re[16], const double im[16]) {
  qdi::Mat4 rho;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      rho(r, c) = qdi::Complex{re[4 * r + c], im ? im[4 * r + c] : 0.0};
  return rho;
}

void rho_to_arrays(const qdi::Mat4& rho, double re[16], double im[16]) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      re[4 * r + c] = rho(r, c).real();
      im[4 * r + c] = rho(r, c).imag();
    }
  }
}

qdi::Side side_from(int side) {
  if (side != QDI_SIDE_A && side != QDI_SIDE_B)
    qdi::raise(qdi::ErrorKind::InvalidArgument, "side must be QDI_SIDE_A or QDI_SIDE_B");
  return side == QDI_SIDE_A ? qdi::Side::A : qdi::Side::B;
}

void fill_moment(const qdi::MomentEstimate& est, qdi_moment_estimate* out) {
  out->value = est.value;
  out->std_error = est.std_error;
  out->n_success = est.n_success;
  out->n_total = est.n_total;
}

}  // namespace

extern "C" {

const char* qdi_version(void) { return QDI_VERSION_STRING; }

const char* qdi_last_error(void) { return g_last_error.c_str(); }

int qdi_state_from_rho(const double re[16], const double im[16],
                       qdi_state** out) {
  if (int rc = check_all(re, im, out)) return rc;
  return guarded([&] {
    *out = new qdi_state{qdi::TwoQubitState::from_matrix(rho_from_arrays(re, im))};
  });
}

int qdi_state_from_bloch(const double x[3], const double y[3],
                         const double t[9], qdi_state** out) {
  if (int rc = check_all(x, y, t, out)) return rc;
  return guarded([&] {
    qdi::BlochForm b;
    for (int i = 0; i < 3; ++i) {
      b.x(i) = x[i];
      b.y(i) = y[i];
      for (int j = 0; j < 3; ++j) b.t(i, j) = t[3 * i + j];
    }
    *out = new qdi_state{qdi::TwoQubitState::from_bloch(b)};
  });
}

int qdi_state_from_json(const char* text, qdi_state** out) {
  if (int rc = check_all(text, out)) return rc;
  return guarded([&] { *out = new qdi_state{qdi::state_from_json(text)}; });
}

int qdi_state_to_json(const qdi_state* s, char* buf, size_t cap, size_t* len) {
  if (int rc = require_nonnull(s)) return rc;
  std::string text;
  if (int rc = guarded([&] { text = qdi::state_to_json(s->value); })) return rc;
  return copy_string(text, buf, cap, len);
}

void qdi_state_free(qdi_state* s) { delete s; }

int qdi_state_rho(const qdi_state* s, double re[16], double im[16]) {
  if (int rc = check_all(s, re, im)) return rc;
  rho_to_arrays(s->value.rho(), re, im);
  return QDI_OK;
}

int qdi_state_bloch(const qdi_state* s, double x[3], double y[3], double t[9]) {
  if (int rc = check_all(s, x, y, t)) return rc;
  return guarded([&] {
    const qdi::BlochForm b = s->value.bloch();
    for (int i = 0; i < 3; ++i) {
      x[i] = b.x(i);
      y[i] = b.y(i);
      for (int j = 0; j < 3; ++j) t[3 * i + j] = b.t(i, j);
    }
  });
}

int qdi_state_purity(const qdi_state* s, double* out) {
  if (int rc = check_all(s, out)) return rc;
  return guarded([&] { *out = s->value.purity(); });
}

int qdi_fidelity(const qdi_state* a, const qdi_state* b, double* out) {
  if (int rc = check_all(a, b, out)) return rc;
  return guarded([&] { *out = qdi::fidelity(a->value, b->value); });
}

int qdi_ppt_min_eigenvalue(const qdi_state* s, double* out) {
  if (int rc = check_all(s, out)) return rc;
  return guarded([&] { *out = qdi::ppt_min_eigenvalue(s->value); });
}

int qdi_random_state(uint64_t seed, uint64_t index, int measure,
                     qdi_state** out) {
  if (int rc = require_nonnull(out)) return rc;
  return guarded([&] {
    if (measure != QDI_MEASURE_HILBERT_SCHMIDT && measure != QDI_MEASURE_PURE_HAAR)
      qdi::raise(qdi::ErrorKind::InvalidArgument, "unknown ensemble measure");
    const auto m = measure == QDI_MEASURE_HILBERT_SCHMIDT
                       ? qdi::EnsembleMeasure::HilbertSchmidt
                       : qdi::EnsembleMeasure::PureHaar;
    *out = new qdi_state{qdi::random_state(m, seed, index)};
  });
}

int qdi_random_pair_with_fidelity(uint64_t seed, uint64_t index, double f_min,
                                  qdi_state** left, qdi_state** right) {
  if (int rc = check_all(left, right)) return rc;
  return guarded([&] {
    auto [l, r] = qdi::random_state_pair_with_fidelity(seed, index, f_min);
    *left = new qdi_state{l};
    *right = new qdi_state{r};
  });
}

int qdi_discord(const qdi_state* s, qdi_discord_report* out) {
  if (int rc = check_all(s, out)) return rc;
  return guarded([&] {
    const qdi::DiscordReport rep = qdi::discord_report(s->value);
    out->d_a = rep.d_a;
    out->d_b = rep.d_b;
    out->q_a = rep.q_a;
    out->q_b = rep.q_b;
    out->q_s = rep.q_s;
    out->v_a_defined = rep.v_a.has_value() ? 1 : 0;
    out->v_b_defined = rep.v_b.has_value() ? 1 : 0;
    out->v_a = rep.v_a.value_or(0.0);
    out->v_b = rep.v_b.value_or(0.0);
  });
}

int qdi_moments_spectral(const qdi_state* s, int side, double* m1, double* m2) {
  if (int rc = check_all(s, m1, m2)) return rc;
  return guarded([&] {
    const auto m = qdi::moments_from_k(
        qdi::k_matrix(s->value.bloch(), side_from(side)));
    *m1 = m.m1;
    *m2 = m.m2;
  });
}

int qdi_moments_multicopy(const qdi_state* s, int side, double* m1, double* m2) {
  if (int rc = check_all(s, m1, m2)) return rc;
  return guarded([&] {
    *m1 = qdi::m1_multicopy(s->value, side_from(side));
    *m2 = qdi::m2_multicopy(s->value, side_from(side));
  });
}

int qdi_uv_box_distribution(const qdi_state* s, double eta, double* p14,
                            double* p23, double* p_other) {
  if (int rc = check_all(s, p14, p23, p_other)) return rc;
  return guarded([&] {
    const auto dist = qdi::uv_box_distribution(s->value, qdi::DetectorModel{eta});
    *p14 = dist.p14;
    *p23 = dist.p23;
    *p_other = dist.p_other;
  });
}

int qdi_uv_box_operators(double eta, double c14_re[16], double c14_im[16],
                         double c23_re[16], double c23_im[16]) {
  if (int rc = check_all(c14_re, c14_im, c23_re, c23_im)) return rc;
  return guarded([&] {
    const auto [e14, e23] =
        qdi::reconstruct_coincidence_operators(qdi::DetectorModel{eta});
    rho_to_arrays(e14, c14_re, c14_im);
    rho_to_arrays(e23, c23_re, c23_im);
  });
}

int qdi_sample_uv_outcome(const qdi_state* s, double eta, int box_kind,
                          uint64_t seed, uint64_t index, int* value) {
  if (int rc = check_all(s, value)) return rc;
  return guarded([&] {
    if (box_kind != QDI_BOX_U && box_kind != QDI_BOX_V)
      qdi::raise(qdi::ErrorKind::InvalidArgument, "unknown box kind");
    qdi::Rng rng = qdi::Rng::substream(seed, index);
    *value = qdi::sample_uv_outcome(
        rng, s->value, qdi::DetectorModel{eta},
        box_kind == QDI_BOX_U ? qdi::BoxKind::U : qdi::BoxKind::V);
  });
}

int qdi_expconfig_create(qdi_expconfig** out) {
  if (int rc = require_nonnull(out)) return rc;
  return guarded([&] { *out = new qdi_expconfig{qdi::ExperimentConfig{}}; });
}

int qdi_expconfig_from_json(const char* text, qdi_expconfig** out) {
  if (int rc = check_all(text, out)) return rc;
  return guarded(
      [&] { *out = new qdi_expconfig{qdi::experiment_config_from_json(text)}; });
}

int qdi_expconfig_to_json(const qdi_expconfig* c, char* buf, size_t cap,
                          size_t* len) {
  if (int rc = require_nonnull(c)) return rc;
  std::string text;
  if (int rc = guarded([&] { text = qdi::experiment_config_to_json(c->value); }))
    return rc;
  return copy_string(text, buf, cap, len);
}

void qdi_expconfig_free(qdi_expconfig* c) { delete c; }

int qdi_expconfig_set_eta(qdi_expconfig* c, double eta) {
  if (int rc = require_nonnull(c)) return rc;
  return guarded([&] {
    qdi::ExperimentConfig next = c->value;
    next.eta = eta;
    next.validate();
    c->value = next;
  });
}

int qdi_expconfig_set_tau_ns(qdi_expconfig* c, double tau_ns) {
  if (int rc = require_nonnull(c)) return rc;
  return guarded([&] {
    qdi::ExperimentConfig next = c->value;
    next.tau_ns = tau_ns;
    next.validate();
    c->value = next;
  });
}

int qdi_expconfig_set_scheme(qdi_expconfig* c, int scheme) {
  if (int rc = require_nonnull(c)) return rc;
  return guarded([&] {
    if (scheme != QDI_SCHEME_DETERMINISTIC && scheme != QDI_SCHEME_PROBABILISTIC)
      qdi::raise(qdi::ErrorKind::InvalidArgument, "unknown delay scheme");
    c->value.delay_scheme = scheme == QDI_SCHEME_DETERMINISTIC
                                ? qdi::DelayScheme::Deterministic
                                : qdi::DelayScheme::Probabilistic;
  });
}

int qdi_expconfig_set_iterations(qdi_expconfig* c, uint64_t iterations) {
  if (int rc = require_nonnull(c)) return rc;
  return guarded([&] {
    qdi::ExperimentConfig next = c->value;
    next.iterations = iterations;
    next.validate();
    c->value = next;
  });
}

int qdi_expconfig_set_seed(qdi_expconfig* c, uint64_t seed) {
  if (int rc = require_nonnull(c)) return rc;
  c->value.seed = seed;
  return QDI_OK;
}

int qdi_estimate_m1(const qdi_state* s, const qdi_expconfig* c,
                    qdi_moment_estimate* out) {
  if (int rc = check_all(s, c, out)) return rc;
  return guarded([&] { fill_moment(qdi::estimate_m1(s->value, c->value), out); });
}

int qdi_estimate_m2(const qdi_state* s, const qdi_expconfig* c,
                    qdi_moment_estimate* out) {
  if (int rc = check_all(s, c, out)) return rc;
  return guarded([&] { fill_moment(qdi::estimate_m2(s->value, c->value), out); });
}

int qdi_estimate_q(const qdi_state* s, const qdi_expconfig* c, double* q,
                   double* std_error, qdi_moment_estimate* m1_out,
                   qdi_moment_estimate* m2_out) {
  if (int rc = check_all(s, c, q, std_error)) return rc;
  return guarded([&] {
    const qdi::QEstimate est = qdi::estimate_q(s->value, c->value);
    *q = est.q;
    *std_error = est.std_error;
    if (m1_out) fill_moment(est.m1, m1_out);
    if (m2_out) fill_moment(est.m2, m2_out);
  });
}

int qdi_throughput(const qdi_expconfig* c, uint64_t n_target, int strict,
                   qdi_throughput_report* out) {
  if (int rc = check_all(c, out)) return rc;
  return guarded([&] {
    const qdi::ThroughputReport rep =
        qdi::throughput(c->value, n_target, strict != 0);
    out->rate_m1_hz = rep.rate_m1_hz;
    out->rate_m2_hz_prob = rep.rate_m2_hz_prob;
    out->rate_m2_hz_det = rep.rate_m2_hz_det;
    out->t_m1_s = rep.t_m1_s;
    out->t_m2_s = rep.t_m2_s;
    out->t_m1_tau = rep.t_m1_tau;
    out->t_m2_tau = rep.t_m2_tau;
    out->p1 = rep.p1;
    out->p2_default = rep.p2_default;
    out->p2_strict = rep.p2_strict;
  });
}

int qdi_mismatch_moments(const qdi_state* left, const qdi_state* right,
                         int side, double* m1, double* m2) {
  if (int rc = check_all(left, right, m1, m2)) return rc;
  return guarded([&] {
    const auto m =
        qdi::mismatch_moments(left->value, right->value, side_from(side));
    *m1 = m.m1;
    *m2 = m.m2;
  });
}

int qdi_mismatch_q(const qdi_state* left, const qdi_state* right,
                   qdi_mismatch_result* out) {
  if (int rc = check_all(left, right, out)) return rc;
  return guarded([&] {
    const qdi::MismatchResult res = qdi::mismatch_q(left->value, right->value);
    out->q_prime = res.q_prime;
    out->q_exact = res.q_exact;
    out->fidelity = res.fidelity;
    out->delta = res.delta;
    out->radicand_clamped = res.radicand_clamped ? 1 : 0;
  });
}

int qdi_robustness_sweep(uint64_t n_pairs, double f_min, uint64_t seed,
                         qdi_robustness_result** out) {
  if (int rc = require_nonnull(out)) return rc;
  return guarded([&] {
    *out = new qdi_robustness_result{qdi::robustness_sweep(n_pairs, f_min, seed)};
  });
}

void qdi_robustness_free(qdi_robustness_result* r) { delete r; }

int qdi_robustness_row(const qdi_robustness_result* r, uint64_t i,
                       double* q_exact, double* q_prime, double* fidelity) {
  if (int rc = check_all(r, q_exact, q_prime, fidelity)) return rc;
  if (i >= r->value.rows.size()) {
    g_last_error = "row index out of range";
    return QDI_ERR_INVALID_ARGUMENT;
  }
  const qdi::RobustnessRow& row = r->value.rows[static_cast<std::size_t>(i)];
  *q_exact = row.q_exact;
  *q_prime = row.q_prime;
  *fidelity = row.fidelity;
  return QDI_OK;
}

int qdi_robustness_summary(const qdi_robustness_result* r, uint64_t* n_pairs,
                           double* f_min, double* max_delta,
                           uint64_t* clamped_count) {
  if (int rc = check_all(r, n_pairs, f_min, max_delta, clamped_count)) return rc;
  *n_pairs = r->value.summary.n_pairs;
  *f_min = r->value.summary.f_min;
  *max_delta = r->value.summary.max_delta;
  *clamped_count = r->value.summary.clamped_count;
  return QDI_OK;
}

int qdi_robustness_histogram(const qdi_robustness_result* r, double* bin_width,
                             uint64_t counts[50]) {
  if (int rc = check_all(r, bin_width, counts)) return rc;
  *bin_width = r->value.summary.histogram_bin_width;
  for (int i = 0; i < qdi::RobustnessSummary::kHistogramBins; ++i)
    counts[i] = r->value.summary.histogram[static_cast<std::size_t>(i)];
  return QDI_OK;
}

}  // extern "C"
