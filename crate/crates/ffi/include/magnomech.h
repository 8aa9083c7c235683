#ifndef MAGNOMECH_H
#define MAGNOMECH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  MM_STATUS_OK = 0,
  MM_STATUS_NULL_POINTER = 1,
  MM_STATUS_INVALID_PARAMS = 2,
  MM_STATUS_DOMAIN = 3,
  MM_STATUS_CONFIG = 4,
  MM_STATUS_UNSTABLE = 5,
  MM_STATUS_NUMERICAL = 6,
  MM_STATUS_UNPHYSICAL = 7,
  MM_STATUS_IO = 8,
  MM_STATUS_PANIC = 9,
} MmStatus;

/**
 * Bipartition selector for log-negativity queries.
 */
typedef enum {
  MM_PAIR_PHOTON_PHONON = 0,
  MM_PAIR_PHOTON_MAGNON = 1,
  MM_PAIR_MAGNON_PHONON = 2,
} MmPair;

/**
 * Opaque system parameters, in units of the mechanical frequency.
 */
typedef struct MmParams MmParams;

/**
 * Opaque outcome of one steady-state evaluation.
 */
typedef struct MmResult MmResult;

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *mm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mm_version(void);

/**
 * New parameter set: the reference device with every coupling off and a
 * vacuum bath. Free with [`mm_params_free`].
 */
MmParams *mm_params_new(void);

/**
 * Load parameters from a TOML or JSON config (the `[system]` table).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
MmStatus mm_params_from_config(const char *path, MmParams **out);

/**
 * # Safety
 * `params` must come from this library and not be used afterwards. NULL is ignored.
 */
void mm_params_free(MmParams *params);

/**
 * Set one parameter by its config key (`delta_m`, `G_bm`, `kappa_a`,
 * `temperature_K`, `nbar_b`, `G_bm_over_g_am`, `Q`, ...).
 *
 * # Safety
 * `params` must be a live handle and `name` a NUL-terminated string.
 */
MmStatus mm_params_set(MmParams *params, const char *name, double value);

/**
 * # Safety
 * `params` must be a live handle, `name` a NUL-terminated string, `out` writable.
 */
MmStatus mm_params_get(const MmParams *params, const char *name, double *out);

/**
 * Select the resonant (`rwa != 0`) or full magnomechanical coupling.
 *
 * # Safety
 * `params` must be a live handle.
 */
MmStatus mm_params_set_rwa(MmParams *params, int rwa);

/**
 * Drift matrix at the handle's `G_bm`.
 *
 * # Safety
 * `params` must be a live handle and `out` must hold 36 doubles.
 */
MmStatus mm_drift_matrix(const MmParams *params, double *out);

/**
 * # Safety
 * `params` must be a live handle and `out` must hold 36 doubles.
 */
MmStatus mm_diffusion_matrix(const MmParams *params, double *out);

/**
 * Evaluate the steady state. An unstable point is not an error: the result
 * reports `stable = 0` and has no covariance.
 *
 * # Safety
 * `params` must be a live handle and `out` writable. Free the result with
 * [`mm_result_free`].
 */
MmStatus mm_evaluate(const MmParams *params, MmResult **out);

/**
 * # Safety
 * `result` must come from this library and not be used afterwards. NULL is ignored.
 */
void mm_result_free(MmResult *result);

/**
 * # Safety
 * `result` must be a live handle and `stable`, `max_real_part` writable.
 */
MmStatus mm_result_stability(const MmResult *result, int *stable, double *max_real_part);

/**
 * Steady-state covariance. Fails with `Unstable` for unstable points.
 *
 * # Safety
 * `result` must be a live handle and `out` must hold 36 doubles.
 */
MmStatus mm_result_covariance(const MmResult *result, double *out);

/**
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
MmStatus mm_result_log_negativity(const MmResult *result, MmPair pair, double *out);

/**
 * Solve `Aσ + σAᵀ = -D` for arbitrary 6×6 `A` and `D`.
 *
 * # Safety
 * `a`, `d` and `out` must each point to 36 doubles.
 */
MmStatus mm_solve_lyapunov(const double *a, const double *d, double *out);

/**
 * Logarithmic negativity of one pair of a 6×6 covariance matrix.
 *
 * # Safety
 * `sigma` must point to 36 doubles and `out` be writable.
 */
MmStatus mm_log_negativity(const double *sigma, MmPair pair, double *out);

/**
 * Mean thermal occupancy of a mode at `omega` rad/s and `kelvin`.
 *
 * # Safety
 * `out` must be writable.
 */
MmStatus mm_thermal_occupancy(double omega, double kelvin, double *out);

#endif  /* MAGNOMECH_H */
