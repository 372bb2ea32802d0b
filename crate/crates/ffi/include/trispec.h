#ifndef TRISPEC_H
#define TRISPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every trispec entry point.
 */
typedef enum {
  /**
   * Success.
   */
  TsOk = 0,
  /**
   * A pointer argument was null or a parameter malformed.
   */
  TsInvalidArgument = 1,
  /**
   * The operation is outside its mathematical domain
   * (z beyond the certified disk, unsupported order, ...).
   */
  TsDomainError = 2,
  /**
   * An iterative solver failed to converge.
   */
  TsNoConvergence = 3,
  /**
   * The requested exact value does not exist for this family.
   */
  TsExactUnavailable = 4,
  /**
   * Internal panic; the handle remains valid.
   */
  TsInternalError = 5,
} TsStatus;

/**
 * Opaque operator-family handle.
 */
typedef struct TsFamily TsFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread, or null.
 * The pointer stays valid until the next failing call on the thread.
 */
const char *ts_last_error_message(void);

/**
 * Create a power family q_k = k^2, b_k = c_k = k^(num/den);
 * alpha = num/den must lie in [0, 2).
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * `ts_family_free`.
 */
TsStatus ts_family_power(int32_t alpha_num, uint32_t alpha_den, TsFamily **out);

/**
 * Create a Whittaker-Hill family b_k = t - k, c_k = t + k with t >= 0;
 * `odd_parity` selects the (2k+1)^2 diagonal.
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * `ts_family_free`.
 */
TsStatus ts_family_whittaker_hill(double t, bool odd_parity, TsFamily **out);

/**
 * Release a family handle. Null is ignored.
 *
 * # Safety
 * `fam` must be a handle returned by a constructor, released once.
 */
void ts_family_free(TsFamily *fam);

/**
 * Localization radius R_n = n^(1-alpha) / (8M) of the family.
 *
 * # Safety
 * `fam` must be a valid handle.
 */
double ts_localization_radius(const TsFamily *fam, uint32_t n);

/**
 * All eigenvalues of the dim x dim truncation at z = z_re + i z_im,
 * sorted by real then imaginary part, written to the caller's buffers
 * (each of length dim). `out_residual`, if non-null, receives the
 * certified relative residual.
 *
 * # Safety
 * `fam` must be valid; `out_re` and `out_im` must point to `dim` doubles.
 */
TsStatus ts_spectrum(const TsFamily *fam,
                     double z_re,
                     double z_im,
                     uintptr_t dim,
                     double *out_re,
                     double *out_im,
                     double *out_residual);

/**
 * The n certified window eigenvalues at z (requires |z| <= R_n); buffers
 * of length n.
 *
 * # Safety
 * `fam` must be valid; `out_re` and `out_im` must point to `n` doubles.
 */
TsStatus ts_window_eigenvalues(const TsFamily *fam,
                               double z_re,
                               double z_im,
                               uint32_t n,
                               double tol,
                               double *out_re,
                               double *out_im);

/**
 * Taylor coefficients a_2, a_4, ..., a_{2 k_max} of branch n as doubles
 * (buffer of length k_max).
 *
 * # Safety
 * `fam` must be valid; `out` must point to `k_max` doubles.
 */
TsStatus ts_taylor_coefficients(const TsFamily *fam, uint32_t n, uint32_t k_max, double *out);

/**
 * Exact coefficient a_{2k}(n) rendered as "p/q"; only for families with
 * integer 2*alpha. The string must be released with `ts_string_free`.
 *
 * # Safety
 * `fam` must be valid; `out` must be a valid pointer.
 */
TsStatus ts_taylor_coefficient_exact(const TsFamily *fam, uint32_t n, uint32_t k, char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from a trispec call, released once.
 */
void ts_string_free(char *s);

/**
 * Partial regularized trace sum_{m<=N} (E_m(z) - q_m - [p=1] a_2(m) z^2).
 *
 * # Safety
 * `fam`, `out_re`, `out_im` must be valid pointers.
 */
TsStatus ts_partial_trace(const TsFamily *fam,
                          double z_re,
                          double z_im,
                          uint32_t p,
                          uint32_t n,
                          double *out_re,
                          double *out_im);

/**
 * z^2 coefficient of the entire-function trace limit (0 below the
 * critical growth rate, -l/2 at it).
 *
 * # Safety
 * `fam` and `out_z2` must be valid pointers.
 */
TsStatus ts_trace_limit_z2(const TsFamily *fam, double *out_z2);

/**
 * Branch eigenvalue E_n(z) refined at the given truncation.
 *
 * # Safety
 * `fam`, `out_re`, `out_im` must be valid pointers.
 */
TsStatus ts_branch_value(const TsFamily *fam,
                         double z_re,
                         double z_im,
                         uint32_t n,
                         uintptr_t truncation,
                         double *out_re,
                         double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRISPEC_H */
