#ifndef OMIT_H
#define OMIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OmitStatus {
  OMIT_STATUS_OK = 0,
  OMIT_STATUS_NULL_POINTER = 1,
  OMIT_STATUS_CONFIG = 2,
  OMIT_STATUS_DOMAIN = 3,
  OMIT_STATUS_CONVERGENCE = 4,
  OMIT_STATUS_PANIC = 5,
} OmitStatus;

/**
 * Opaque model handle.
 */
typedef struct OmitModel OmitModel;

/**
 * System parameters. `has_delta_c = false` selects the detuning that puts
 * the effective detuning on the mechanical frequency at zero charge.
 */
typedef struct OmitParams {
  double lambda_c_m;
  double cavity_length_m;
  double m_eff_kg;
  double omega_m_rad_s;
  double gamma_m_rad_s;
  double kappa_rad_s;
  double r0_m;
  double c_bias_f;
  double u_bias_v;
  double p_pump_w;
  bool has_delta_c;
  double delta_c_rad_s;
  bool coulomb_repulsive;
} OmitParams;

typedef struct OmitSteadyState {
  double q_s_m;
  double p_s;
  double c_s_re;
  double c_s_im;
  double n_photon;
  double delta_eff_rad_s;
  double beta;
  uint32_t real_root_count;
  bool multistable;
} OmitSteadyState;

typedef struct OmitTuningPoints {
  double x_plus;
  double x_minus;
  double x_zero;
  double width;
} OmitTuningPoints;

typedef struct OmitChargeEstimate {
  double n_hat;
  uint32_t n_int;
  double residual_rad_s;
  bool ambiguous;
  uint32_t candidate_count;
} OmitChargeEstimate;

typedef struct OmitMetrics {
  double min_force_n;
  double surface_density_per_cm2;
} OmitMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fills `out` with the reference parameter set (145 ng resonator, U = 1 V).
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum OmitStatus omit_params_reference(struct OmitParams *out);

/**
 * # Safety
 * `params` must be null or point to a valid `OmitParams`; `out` must be
 * null or valid for writes. The handle written to `out` must be released
 * with `omit_model_free`.
 */
enum OmitStatus omit_model_new(const struct OmitParams *params, struct OmitModel **out);

/**
 * Builds a model from a JSON config document (frequencies in Hz).
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` as for
 * `omit_model_new`.
 */
enum OmitStatus omit_model_from_config_json(const char *json, struct OmitModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void omit_model_free(struct OmitModel *model);

/**
 * Resolved bare pump-cavity detuning (rad/s).
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or valid for writes.
 */
enum OmitStatus omit_model_delta_c(const struct OmitModel *model, double *out);

/**
 * # Safety
 * `model` must be null or a live handle; `out` null or valid for writes.
 */
enum OmitStatus omit_steady_state(const struct OmitModel *model,
                                  uint32_t n,
                                  struct OmitSteadyState *out);

/**
 * Exact probe quadrature at `x = delta - omega_m` for charge number `n`.
 *
 * # Safety
 * `model` must be null or a live handle; `re` and `im` null or valid for
 * writes.
 */
enum OmitStatus omit_epsilon_t_exact(const struct OmitModel *model,
                                     uint32_t n,
                                     double x_rad_s,
                                     double *re,
                                     double *im);

/**
 * Closed-form near-resonance probe quadrature.
 *
 * # Safety
 * `re` and `im` must be null or valid for writes.
 */
enum OmitStatus omit_epsilon_t_approx(double kappa,
                                      double gamma_m,
                                      double beta,
                                      double x_rad_s,
                                      double *re,
                                      double *im);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum OmitStatus omit_tuning_points(double kappa,
                                   double gamma_m,
                                   double beta,
                                   struct OmitTuningPoints *out);

/**
 * Window width (rad/s) at a real-valued charge number.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or valid for writes.
 */
enum OmitStatus omit_width_of_n(const struct OmitModel *model, double n, double *out);

/**
 * Inverts a measured width over `[n_min, n_max]`. When `candidates` is
 * non-null, up to `capacity` continuous preimages are written there.
 *
 * # Safety
 * `model` must be null or a live handle; `out` null or valid for writes;
 * `candidates` null or valid for `capacity` writes.
 */
enum OmitStatus omit_estimate_charge(const struct OmitModel *model,
                                     double width_rad_s,
                                     uint32_t n_min,
                                     uint32_t n_max,
                                     struct OmitChargeEstimate *out,
                                     double *candidates,
                                     size_t capacity);

/**
 * # Safety
 * `model` must be null or a live handle; `out` null or valid for writes.
 */
enum OmitStatus omit_detection_metrics(const struct OmitModel *model, struct OmitMetrics *out);

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *omit_last_error_message(void);

const char *omit_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMIT_H */
