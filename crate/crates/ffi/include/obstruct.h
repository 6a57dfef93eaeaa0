#ifndef OBSTRUCT_H
#define OBSTRUCT_H

#include <stddef.h>
#include <stdint.h>

typedef enum ObstructStatus {
  OBSTRUCT_STATUS_OK = 0,
  OBSTRUCT_STATUS_INTERNAL = 1,
  OBSTRUCT_STATUS_WINDOW_OVERFLOW = 2,
  OBSTRUCT_STATUS_INVALID_INPUT = 3,
  OBSTRUCT_STATUS_NULL_POINTER = 4,
  OBSTRUCT_STATUS_PANIC = 5,
} ObstructStatus;

/**
 * A finitely presented graded algebra.
 */
typedef struct ObstructAlgebra ObstructAlgebra;

/**
 * The triple product of a cyclic group's cohomology ring.
 */
typedef struct ObstructTripleProduct ObstructTripleProduct;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *obstruct_last_error(void);

/**
 * Library version as a static string.
 */
const char *obstruct_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void obstruct_string_free(char *s);

/**
 * Builds an algebra from a presentation JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObstructStatus obstruct_algebra_from_json(const char *json, struct ObstructAlgebra **out);

/**
 * The mod-p cohomology ring of the cyclic group of the given prime
 * power order, materialised in degrees `[0, window]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ObstructStatus obstruct_algebra_group_cohomology(uint32_t order,
                                                      int64_t window,
                                                      struct ObstructAlgebra **out);

/**
 * # Safety
 * `alg` must be NULL or a handle from this library, not yet freed.
 */
void obstruct_algebra_free(struct ObstructAlgebra *alg);

/**
 * Dimension of the algebra in degree `deg`.
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum ObstructStatus obstruct_algebra_dim(const struct ObstructAlgebra *alg,
                                         int64_t deg,
                                         size_t *out);

/**
 * Normal form of the product of two homogeneous expressions, as a newly
 * allocated string.
 *
 * # Safety
 * `alg` must be a live handle, `a` and `b` NUL-terminated strings and
 * `out` a valid pointer.
 */
enum ObstructStatus obstruct_algebra_multiply(const struct ObstructAlgebra *alg,
                                              const char *a,
                                              const char *b,
                                              char **out);

/**
 * Transfers the product structure of the cyclic group's endomorphism
 * dg algebra to cohomology on `[0, window]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ObstructStatus obstruct_triple_product_cyclic(uint32_t order,
                                                   int64_t window,
                                                   struct ObstructTripleProduct **out);

/**
 * Decides whether the triple product class vanishes on tuples of total
 * degree at most `size`. Writes 1 for a nontrivial class, 0 otherwise.
 *
 * # Safety
 * `tp` must be a live handle and `nontrivial` a valid pointer.
 */
enum ObstructStatus obstruct_triple_product_decide(const struct ObstructTripleProduct *tp,
                                                   int64_t size,
                                                   int32_t *nontrivial);

/**
 * # Safety
 * `tp` must be NULL or a handle from this library, not yet freed.
 */
void obstruct_triple_product_free(struct ObstructTripleProduct *tp);

/**
 * Runs a command-line invocation given as a JSON array of arguments
 * (without the program name), e.g. `["m3", "cyclic:3", "--window", "6"]`.
 * The result document is written to `out` as a newly allocated string.
 *
 * # Safety
 * `args_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObstructStatus obstruct_run(const char *args_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OBSTRUCT_H */
