/* qdi: two-qubit quantum discord indicators, coincidence-experiment
 * simulation and throughput/robustness analysis.
 *
 * All functions return a status code (QDI_OK on success); outputs are
 * written through pointers.  On failure qdi_last_error() returns a
 * thread-local description of what went wrong.  Density matrices cross the
 * boundary as row-major 4x4 real/imaginary arrays in the |HH>,|HV>,|VH>,|VV>
 * basis.
 */
#ifndef QDI_H
#define QDI_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__) || defined(__clang__)
#define QDI_API __attribute__((visibility("default")))
#else
#define QDI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  QDI_OK = 0,
  QDI_ERR_NULLPTR = 1,
  QDI_ERR_PARSE = 2,
  QDI_ERR_INVALID_STATE = 3,
  QDI_ERR_INSUFFICIENT_STATISTICS = 4,
  QDI_ERR_INVALID_ARGUMENT = 5,
  QDI_ERR_SAMPLING_EXHAUSTED = 6,
  QDI_ERR_INVALID_MOMENTS = 7,
  QDI_ERR_UNKNOWN_MODE = 8,
  QDI_ERR_IO = 9,
  QDI_ERR_BUFFER_TOO_SMALL = 10,
  QDI_ERR_INTERNAL = 11
};

enum { QDI_SIDE_A = 0, QDI_SIDE_B = 1 };
enum { QDI_MEASURE_HILBERT_SCHMIDT = 0, QDI_MEASURE_PURE_HAAR = 1 };
enum { QDI_SCHEME_DETERMINISTIC = 0, QDI_SCHEME_PROBABILISTIC = 1 };
enum { QDI_BOX_U = 0, QDI_BOX_V = 1 };

typedef struct qdi_state qdi_state;
typedef struct qdi_expconfig qdi_expconfig;
typedef struct qdi_robustness_result qdi_robustness_result;

QDI_API const char* qdi_version(void);
QDI_API const char* qdi_last_error(void);

/* ---- states ---------------------------------------------------------- */

QDI_API int qdi_state_from_rho(const double re[16], const double im[16],
                               qdi_state** out);
QDI_API int qdi_state_from_bloch(const double x[3], const double y[3],
                                 const double t[9], qdi_state** out);
QDI_API int qdi_state_from_json(const char* text, qdi_state** out);
QDI_API int qdi_state_to_json(const qdi_state* s, char* buf, size_t cap,
                              size_t* len);
QDI_API void qdi_state_free(qdi_state* s);

QDI_API int qdi_state_rho(const qdi_state* s, double re[16], double im[16]);
QDI_API int qdi_state_bloch(const qdi_state* s, double x[3], double y[3],
                            double t[9]);
QDI_API int qdi_state_purity(const qdi_state* s, double* out);
QDI_API int qdi_fidelity(const qdi_state* a, const qdi_state* b, double* out);
QDI_API int qdi_ppt_min_eigenvalue(const qdi_state* s, double* out);

/* element `index` of the random ensemble stream for `seed` */
QDI_API int qdi_random_state(uint64_t seed, uint64_t index, int measure,
                             qdi_state** out);
/* pair with fidelity in [f_min, 1) */
QDI_API int qdi_random_pair_with_fidelity(uint64_t seed, uint64_t index,
                                          double f_min, qdi_state** left,
                                          qdi_state** right);

/* ---- discord indicators ---------------------------------------------- */

typedef struct {
  double d_a, d_b;
  double q_a, q_b, q_s;
  double v_a, v_b;          /* meaningful only when the defined flag is set */
  int v_a_defined, v_b_defined;
} qdi_discord_report;

QDI_API int qdi_discord(const qdi_state* s, qdi_discord_report* out);
QDI_API int qdi_moments_spectral(const qdi_state* s, int side, double* m1,
                                 double* m2);
QDI_API int qdi_moments_multicopy(const qdi_state* s, int side, double* m1,
                                  double* m2);

/* ---- optical coincidence box ----------------------------------------- */

QDI_API int qdi_uv_box_distribution(const qdi_state* s, double eta,
                                    double* p14, double* p23, double* p_other);
/* coincidence POVM elements recovered from the optical model */
QDI_API int qdi_uv_box_operators(double eta, double c14_re[16],
                                 double c14_im[16], double c23_re[16],
                                 double c23_im[16]);
/* one box reading: +1/+2 outer coincidence (U/V), -4 inner, 0 otherwise */
QDI_API int qdi_sample_uv_outcome(const qdi_state* s, double eta, int box_kind,
                                  uint64_t seed, uint64_t index, int* value);

/* ---- experiment configuration and estimators ------------------------- */

QDI_API int qdi_expconfig_create(qdi_expconfig** out); /* documented defaults */
QDI_API int qdi_expconfig_from_json(const char* text, qdi_expconfig** out);
QDI_API int qdi_expconfig_to_json(const qdi_expconfig* c, char* buf, size_t cap,
                                  size_t* len);
QDI_API void qdi_expconfig_free(qdi_expconfig* c);

QDI_API int qdi_expconfig_set_eta(qdi_expconfig* c, double eta);
QDI_API int qdi_expconfig_set_tau_ns(qdi_expconfig* c, double tau_ns);
QDI_API int qdi_expconfig_set_scheme(qdi_expconfig* c, int scheme);
QDI_API int qdi_expconfig_set_iterations(qdi_expconfig* c, uint64_t iterations);
QDI_API int qdi_expconfig_set_seed(qdi_expconfig* c, uint64_t seed);

typedef struct {
  double value;
  double std_error;
  uint64_t n_success;
  uint64_t n_total;
} qdi_moment_estimate;

QDI_API int qdi_estimate_m1(const qdi_state* s, const qdi_expconfig* c,
                            qdi_moment_estimate* out);
QDI_API int qdi_estimate_m2(const qdi_state* s, const qdi_expconfig* c,
                            qdi_moment_estimate* out);
QDI_API int qdi_estimate_q(const qdi_state* s, const qdi_expconfig* c,
                           double* q, double* std_error,
                           qdi_moment_estimate* m1_out,
                           qdi_moment_estimate* m2_out);

typedef struct {
  double rate_m1_hz;
  double rate_m2_hz_prob;
  double rate_m2_hz_det;
  double t_m1_s, t_m2_s;
  double t_m1_tau, t_m2_tau;
  double p1, p2_default, p2_strict;
} qdi_throughput_report;

QDI_API int qdi_throughput(const qdi_expconfig* c, uint64_t n_target,
                           int strict, qdi_throughput_report* out);

/* ---- source-mismatch robustness --------------------------------------- */

typedef struct {
  double q_prime;
  double q_exact;
  double fidelity;
  double delta;
  int radicand_clamped;
} qdi_mismatch_result;

QDI_API int qdi_mismatch_moments(const qdi_state* left, const qdi_state* right,
                                 int side, double* m1, double* m2);
QDI_API int qdi_mismatch_q(const qdi_state* left, const qdi_state* right,
                           qdi_mismatch_result* out);

QDI_API int qdi_robustness_sweep(uint64_t n_pairs, double f_min, uint64_t seed,
                                 qdi_robustness_result** out);
QDI_API void qdi_robustness_free(qdi_robustness_result* r);
QDI_API int qdi_robustness_row(const qdi_robustness_result* r, uint64_t i,
                               double* q_exact, double* q_prime,
                               double* fidelity);
QDI_API int qdi_robustness_summary(const qdi_robustness_result* r,
                                   uint64_t* n_pairs, double* f_min,
                                   double* max_delta, uint64_t* clamped_count);
/* histogram of |q_prime - q_exact| in 50 bins; returns the bin width */
QDI_API int qdi_robustness_histogram(const qdi_robustness_result* r,
                                     double* bin_width, uint64_t counts[50]);

#ifdef __cplusplus
}
#endif

#endif /* QDI_H */
