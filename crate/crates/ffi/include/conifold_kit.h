#ifndef CONIFOLD_KIT_H
#define CONIFOLD_KIT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_VERIFICATION_FAILED = 1,
  CK_STATUS_INVALID_ARGUMENT = 2,
  CK_STATUS_IO = 3,
  CK_STATUS_NULL_POINTER = 4,
  CK_STATUS_INTERNAL = 5,
} CkStatus;

/**
 * Amoeba point cloud, `(b1, b2)` pairs.
 */
typedef struct CkAmoeba CkAmoeba;

/**
 * Fixed resolution of a generalized conifold.
 */
typedef struct CkGeometry CkGeometry;

/**
 * Truncated power series with exact rational coefficients.
 */
typedef struct CkSeries CkSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after success.
 * Valid until the next call on the same thread.
 */
const char *ck_last_error(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *ck_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ck_string_free(char *s);

/**
 * Number of maximal triangulations of the trapezoid (`generalized` true)
 * or the rectangle, by exhaustive enumeration bounded by `guard` points.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_triangulation_count(int64_t k,
                                     int64_t l,
                                     bool generalized,
                                     size_t guard,
                                     uint64_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_geometry_new(int64_t k, int64_t l, struct CkGeometry **out);

/**
 * # Safety
 * `g` must come from [`ck_geometry_new`] and not have been freed. Null is ignored.
 */
void ck_geometry_free(struct CkGeometry *g);

/**
 * Number of divisors with a g-function (the height-one rays).
 *
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_geometry_divisor_count(const struct CkGeometry *g, size_t *out);

/**
 * The g-function of divisor `p`, truncated at total degree `order`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_g_function(const struct CkGeometry *g,
                            size_t p,
                            uint32_t order,
                            struct CkSeries **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void ck_series_free(struct CkSeries *s);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_series_term_count(const struct CkSeries *s, size_t *out);

/**
 * JSON `{vars, order, terms: [{e, num, den}]}`; free with [`ck_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_series_to_json(const struct CkSeries *s, char **out);

/**
 * Human-readable form, e.g. `C1 + 3/2*C1^2 + O(3)`; free with [`ck_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_series_to_string(const struct CkSeries *s, char **out);

/**
 * Checks the open mirror identity for divisor `p` using the series `gp`
 * in place of the computed g-function (pass null to use the computed one).
 * Returns `Ok` or `VerificationFailed`.
 *
 * # Safety
 * `g` must be valid; `gp` must be valid or null.
 */
enum CkStatus ck_verify_open_mirror(const struct CkGeometry *g,
                                    size_t p,
                                    uint32_t order,
                                    const struct CkSeries *gp);

/**
 * Runs the full verification suite and returns its JSON report through
 * `out` (also on `VerificationFailed`).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CkStatus ck_verify_all(int64_t k, int64_t l, uint32_t order, uint64_t seed, char **out);

/**
 * Mirror equations as JSON. `name` is one of `resolved-G`, `deformed-G`,
 * `resolved-O`, `deformed-O`; Kähler parameters stay symbolic.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` valid for writes.
 */
enum CkStatus ck_mirror_json(const char *name,
                             int64_t k,
                             int64_t l,
                             uint32_t order,
                             bool expanded,
                             char **out);

/**
 * Samples the amoeba of `f(z) g(w) = 0` for monic `f`, `g` with the given
 * roots, on `radii x angles` circles in each variable.
 *
 * # Safety
 * Root arrays must hold `nf` and `ng` values; `out` must be valid for writes.
 */
enum CkStatus ck_amoeba_factorized(const double *f_re,
                                   const double *f_im,
                                   size_t nf,
                                   const double *g_re,
                                   const double *g_im,
                                   size_t ng,
                                   size_t radii,
                                   size_t angles,
                                   double tol,
                                   struct CkAmoeba **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum CkStatus ck_amoeba_len(const struct CkAmoeba *a, size_t *out);

/**
 * Copies up to `cap` points as interleaved `b1, b2` into `buf`, which must
 * hold `2 * cap` doubles; `written` receives the number of points copied.
 *
 * # Safety
 * Pointers must be valid and `buf` large enough.
 */
enum CkStatus ck_amoeba_points(const struct CkAmoeba *a, double *buf, size_t cap, size_t *written);

/**
 * # Safety
 * `a` must come from this library and not have been freed. Null is ignored.
 */
void ck_amoeba_free(struct CkAmoeba *a);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONIFOLD_KIT_H */
