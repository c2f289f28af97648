#ifndef CARLEMAN_LIFT_H
#define CARLEMAN_LIFT_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A documented precondition does not hold (strip, time range, ...).
   */
  CL_STATUS_PRECONDITION = 3,
  /**
   * Integration or branch tracking failed.
   */
  CL_STATUS_NUMERIC = 4,
  CL_STATUS_IO = 5,
  /**
   * The output buffer is shorter than required.
   */
  CL_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A panic was caught at the boundary.
   */
  CL_STATUS_PANIC = 7,
} ClStatus;

/**
 * Long-time behaviour of a case-study trajectory.
 */
typedef enum ClClass {
  CL_CLASS_BLOW_UP = 0,
  CL_CLASS_LIMIT_CYCLE = 1,
  CL_CLASS_CONVERGES = 2,
  CL_CLASS_DIVERGES = 3,
  CL_CLASS_EQUILIBRIUM = 4,
} ClClass;

/**
 * Which lifting a section uses. Passed as `int32_t`.
 */
typedef enum ClScheme {
  CL_SCHEME_CARLEMAN = 0,
  CL_SCHEME_CARLEMAN_FOURIER = 1,
  /**
   * Single chain `e^{ikx}`, nonnegative frequencies only.
   */
  CL_SCHEME_CONCISE_CF = 2,
} ClScheme;

/**
 * A finite section of one of the liftings.
 */
typedef struct ClSection ClSection;

/**
 * Sampled solution of a section.
 */
typedef struct ClTrajectory ClTrajectory;

/**
 * Governing function `g(x) = sum_m g_m e^{imx}`.
 */
typedef struct ClTrigPoly ClTrigPoly;

/**
 * Complex number with the memory layout of C99 `double _Complex`.
 */
typedef struct ClComplex {
  double re;
  double im;
} ClComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build `g` from `2 * degree + 1` coefficients, `coeffs[j] = g_{j - degree}`.
 *
 * # Safety
 * `coeffs` must point to `n` readable values and `out` must be writable.
 */
enum ClStatus cl_trigpoly_new(size_t degree,
                              const struct ClComplex *coeffs,
                              size_t n,
                              struct ClTrigPoly **out);

/**
 * `g(x) = a (1 - b e^{ix})`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_trigpoly_case_study(struct ClComplex a,
                                     struct ClComplex b,
                                     struct ClTrigPoly **out);

/**
 * # Safety
 * `poly` must come from this library and `out` must be writable.
 */
enum ClStatus cl_trigpoly_eval(const struct ClTrigPoly *poly,
                               struct ClComplex x,
                               struct ClComplex *out);

/**
 * # Safety
 * `poly` must be null or a live handle from this library.
 */
void cl_trigpoly_free(struct ClTrigPoly *poly);

/**
 * Build the section of order `order` for `scheme` (a [`ClScheme`] value).
 *
 * # Safety
 * `poly` must come from this library and `out` must be writable.
 */
enum ClStatus cl_section_build(const struct ClTrigPoly *poly,
                               int32_t scheme,
                               size_t order,
                               struct ClSection **out);

/**
 * Number of lifted unknowns, 0 for a null handle.
 *
 * # Safety
 * `section` must be null or a live handle from this library.
 */
size_t cl_section_dim(const struct ClSection *section);

/**
 * Copy the state matrix row by row into `buf`, which must hold `dim * dim`
 * values.
 *
 * # Safety
 * `buf` must point to `len` writable values.
 */
enum ClStatus cl_section_matrix(const struct ClSection *section, struct ClComplex *buf, size_t len);

/**
 * Solve the section from `x0` on `steps` uniform intervals of `[0, t1]`.
 *
 * # Safety
 * `section` must come from this library and `out` must be writable.
 */
enum ClStatus cl_section_solve(const struct ClSection *section,
                               struct ClComplex x0,
                               double t1,
                               size_t steps,
                               struct ClTrajectory **out);

/**
 * # Safety
 * `section` must be null or a live handle from this library.
 */
void cl_section_free(struct ClSection *section);

/**
 * Number of time samples, 0 for a null handle.
 *
 * # Safety
 * `traj` must be null or a live handle from this library.
 */
size_t cl_trajectory_len(const struct ClTrajectory *traj);

/**
 * # Safety
 * `traj` must be null or a live handle from this library.
 */
size_t cl_trajectory_dim(const struct ClTrajectory *traj);

/**
 * Leading samples that hold finite values; later ones are NaN after an
 * overflow.
 *
 * # Safety
 * `traj` must be null or a live handle from this library.
 */
size_t cl_trajectory_valid_samples(const struct ClTrajectory *traj);

/**
 * # Safety
 * `buf` must point to `len` writable values.
 */
enum ClStatus cl_trajectory_times(const struct ClTrajectory *traj, double *buf, size_t len);

/**
 * Values of lifted component `k` (0-based) at every sample.
 *
 * # Safety
 * `buf` must point to `len` writable values.
 */
enum ClStatus cl_trajectory_component(const struct ClTrajectory *traj,
                                      size_t k,
                                      struct ClComplex *buf,
                                      size_t len);

/**
 * # Safety
 * `traj` must be null or a live handle from this library.
 */
void cl_trajectory_free(struct ClTrajectory *traj);

/**
 * Guaranteed time range `T*` of the Carleman bound.
 *
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_carleman_time_range(double c0, double r0, struct ClComplex x0, double *out);

/**
 * Carleman error bound for order `order` at time `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_carleman_bound(double c0,
                                double r0,
                                struct ClComplex x0,
                                size_t order,
                                double t,
                                double *out);

/**
 * Carleman-Fourier error bound of `poly` at radius `r`.
 *
 * # Safety
 * `poly` must come from this library and `out` must be writable.
 */
enum ClStatus cl_cf_bound(const struct ClTrigPoly *poly,
                          struct ClComplex x0,
                          double r,
                          size_t order,
                          double t,
                          double *out);

/**
 * Case-study time range `T*_CF` at the optimal radius.
 */
double cl_cf_guaranteed_time_range(double im_x0);

/**
 * First time the case-study error reaches one, `INFINITY` if never.
 *
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_actual_time_range(double phi, double im_x0, double *out);

/**
 * Exact solution of `dx/dt = a (1 - e^{ix})` at time `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_case_exact_solution(struct ClComplex a,
                                     struct ClComplex x0,
                                     double t,
                                     struct ClComplex *out);

/**
 * Classify a case-study trajectory. `t0` receives the blow-up time, or NaN
 * for the other classes.
 *
 * # Safety
 * `class` and `t0` must be writable.
 */
enum ClStatus cl_case_classify(struct ClComplex a,
                               struct ClComplex x0,
                               enum ClClass *class_,
                               double *t0);

/**
 * Copy the message of the last failed call on this thread into `buf`.
 *
 * Returns the length of the message including the terminating NUL, or 0 if
 * no call has failed yet. The copy is truncated to `len` bytes (always NUL
 * terminated when `len > 0`); pass a null `buf` to query the size.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cl_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARLEMAN_LIFT_H */
