#ifndef APOFAMILY_H
#define APOFAMILY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApfStatus {
  ApfStatus_Ok = 0,
  ApfStatus_NullPointer = 1,
  ApfStatus_InvalidArgument = 2,
  ApfStatus_Internal = 3,
} ApfStatus;

/**
 * Family parameters `(k, A, B, alpha, m, r)`.
 */
typedef struct ApfParams ApfParams;

/**
 * An exact polynomial in `x, y, z` (or a subset).
 */
typedef struct ApfPoly ApfPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * owned by the library.
 */
const char *apf_last_error(void);

/**
 * Builds a parameter handle. `a` and `b` are rationals written as `"p/q"`
 * or integers.
 *
 * # Safety
 * `a` and `b` must be null or NUL-terminated strings; `out` must be null or
 * writable.
 */
enum ApfStatus apf_params_new(uint32_t k,
                              const char *a,
                              const char *b,
                              int64_t alpha,
                              uint32_t m,
                              uint32_t r,
                              struct ApfParams **out);

/**
 * # Safety
 * `p` must be null or a handle from [`apf_params_new`] not yet freed.
 */
void apf_params_free(struct ApfParams *p);

/**
 * `P_n` for the given parameters, in `x, y, z`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum ApfStatus apf_uateghp(const struct ApfParams *params, uint32_t n, struct ApfPoly **out);

/**
 * Gould-Hopper polynomial `H_n^{(m)}(x, y)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ApfStatus apf_gould_hopper(uint32_t n, uint32_t m, struct ApfPoly **out);

/**
 * Truncated exponential polynomial in `x, z`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ApfStatus apf_trunc_exp(uint32_t n, uint32_t r, struct ApfPoly **out);

/**
 * Three-variable truncated exponential Gould-Hopper polynomial.
 *
 * # Safety
 * `out` must be writable.
 */
enum ApfStatus apf_tegh_3v(uint32_t n, uint32_t m, uint32_t r, struct ApfPoly **out);

/**
 * Canonical text form, e.g. `x^3 + 6*x*y`. Free with [`apf_string_free`].
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum ApfStatus apf_poly_to_string(const struct ApfPoly *poly, char **out);

/**
 * Value at a rational point. Variables the polynomial does not use are
 * ignored. Free the result with [`apf_string_free`].
 *
 * # Safety
 * `poly` must be a live handle; `x`, `y`, `z` NUL-terminated strings;
 * `out` writable.
 */
enum ApfStatus apf_poly_eval(const struct ApfPoly *poly,
                             const char *x,
                             const char *y,
                             const char *z,
                             char **out);

/**
 * # Safety
 * `p` must be null or a handle returned by this library not yet freed.
 */
void apf_poly_free(struct ApfPoly *p);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void apf_string_free(char *s);

/**
 * Verifies `theorem` (e.g. `"T5_1"`, `"expansion"`) on the seeded sample
 * for `trial` and writes the JSON report. A printed-identity deviation is
 * still `Ok`; inspect the report's `status`.
 *
 * # Safety
 * `theorem` must be a NUL-terminated string; `out_json` writable.
 */
enum ApfStatus apf_verify(const char *theorem,
                          uint64_t seed,
                          uint32_t trial,
                          uint32_t order,
                          char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APOFAMILY_H */
