#ifndef JCM_H
#define JCM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define JCM_TRUNCATION_FIXED 0

#define JCM_TRUNCATION_ADAPTIVE 1

typedef enum JcmStatus {
  JCM_STATUS_OK = 0,
  JCM_STATUS_NULL_POINTER = 1,
  JCM_STATUS_INVALID_ARGUMENT = 2,
  JCM_STATUS_BUFFER_TOO_SMALL = 3,
  JCM_STATUS_INSUFFICIENT_DATA = 4,
  JCM_STATUS_DEGENERATE = 5,
  JCM_STATUS_NOT_POSITIVE_SEMIDEFINITE = 6,
  JCM_STATUS_INTERNAL = 7,
} JcmStatus;

/**
 * Opaque model handle.
 */
typedef struct JcmModel JcmModel;

/**
 * `order` is read for `JCM_TRUNCATION_FIXED`, `epsilon` for
 * `JCM_TRUNCATION_ADAPTIVE`.
 */
typedef struct JcmTruncation {
  uint32_t kind;
  size_t order;
  double epsilon;
} JcmTruncation;

typedef struct JcmEvolutionMatrix {
  double l1;
  double l2;
  double l3;
  double l4;
} JcmEvolutionMatrix;

typedef struct JcmBloch {
  double sx;
  double sy;
  double sz;
} JcmBloch;

typedef struct JcmTimeAverages {
  double avg_l1;
  double avg_l2;
  double avg_l3;
  double avg_l4;
} JcmTimeAverages;

typedef struct JcmMoments {
  double mu;
  double sigma2;
} JcmMoments;

typedef struct JcmEntanglement {
  double weight;
  double concurrence;
  double eof_normalized;
  double eof_lower_bound;
} JcmEntanglement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *jcm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *jcm_version(void);

/**
 * Creates a model with field frequency `omega`, atomic frequency `omega0`
 * and coupling `g` (`hbar = 1`).
 *
 * # Safety
 * `truncation` must be null or valid; `out` must be null or writable.
 */
enum JcmStatus jcm_model_new(double beta,
                             double omega,
                             double omega0,
                             double g,
                             const struct JcmTruncation *truncation,
                             struct JcmModel **out);

/**
 * Resonant model in reduced units (`omega = omega0 = g = 1`).
 *
 * # Safety
 * See [`jcm_model_new`].
 */
enum JcmStatus jcm_model_new_resonant(double beta,
                                      const struct JcmTruncation *truncation,
                                      struct JcmModel **out);

/**
 * # Safety
 * `model` must be null or a handle from `jcm_model_new*` not yet freed.
 */
void jcm_model_free(struct JcmModel *model);

/**
 * Map coefficients at time `t` (physical units of the model).
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum JcmStatus jcm_evolution_matrix(const struct JcmModel *model,
                                    double t,
                                    struct JcmEvolutionMatrix *out);

/**
 * `S(t)` from `S(0) = s0`.
 *
 * # Safety
 * `model` must be a live handle, `s0` readable and `out` writable.
 */
enum JcmStatus jcm_evolve_bloch(const struct JcmModel *model,
                                const struct JcmBloch *s0,
                                double t,
                                struct JcmBloch *out);

/**
 * Closed-form long-time averages of the map coefficients.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum JcmStatus jcm_time_averages(const struct JcmModel *model, struct JcmTimeAverages *out);

/**
 * Trapezoidal average of `S(t)` over `[0, t_max]`, together with the
 * closed-form prediction for the same `s0`.
 *
 * # Safety
 * `model` must be a live handle, `s0` readable, `numeric` and `closed`
 * writable.
 */
enum JcmStatus jcm_time_average_numeric(const struct JcmModel *model,
                                        const struct JcmBloch *s0,
                                        double t_max,
                                        double step,
                                        struct JcmBloch *numeric,
                                        struct JcmBloch *closed);

/**
 * Fills `values[0..n_samples]` with `S_z(k dt)` for `S(0) = 0`.
 *
 * # Safety
 * `model` must be a live handle and `values` writable for `capacity`
 * doubles.
 */
enum JcmStatus jcm_sample_series(const struct JcmModel *model,
                                 double dt,
                                 size_t n_samples,
                                 double *values,
                                 size_t capacity);

/**
 * Mean and variance of `S_z(k dt)`, `k = 0..n_samples`, for `S(0) = 0`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum JcmStatus jcm_sample_moments(const struct JcmModel *model,
                                  double dt,
                                  size_t n_samples,
                                  struct JcmMoments *out);

/**
 * Entanglement lower bound of the two-lowest-level projection, reduced
 * units, `S(0) = (1, 0, 0)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum JcmStatus jcm_entanglement_lower_bound(double t, double beta, struct JcmEntanglement *out);

/**
 * Trace of the unnormalized projection.
 *
 * # Safety
 * `out` must be writable.
 */
enum JcmStatus jcm_projection_weight(double t, double beta, double *out);

/**
 * Wootters concurrence of a 4x4 density matrix given as 32 doubles,
 * row-major, real and imaginary parts interleaved.
 *
 * # Safety
 * `rho` must be readable for 32 doubles and `out` writable.
 */
enum JcmStatus jcm_concurrence(const double *rho, double *out);

/**
 * Atom Bloch vector from the exact truncated-Fock evolution.
 *
 * # Safety
 * `model` must be a live handle, `s0` readable and `out` writable.
 */
enum JcmStatus jcm_oracle_bloch(const struct JcmModel *model,
                                const struct JcmBloch *s0,
                                double t,
                                size_t fock_dim,
                                struct JcmBloch *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JCM_H */
