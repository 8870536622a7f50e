#ifndef PPM_H
#define PPM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PpmAlgorithm {
  PPM_ALGORITHM_AUTO = 0,
  PPM_ALGORITHM_BRUTE = 1,
  PPM_ALGORITHM_TREE_DP = 2,
  PPM_ALGORITHM_STRIPS = 3,
  PPM_ALGORITHM_EVEN_ODD = 4,
} PpmAlgorithm;

/**
 * Result of every fallible call.
 */
typedef enum PpmStatus {
  PPM_STATUS_OK = 0,
  PPM_STATUS_NULL_POINTER = 1,
  PPM_STATUS_INVALID_PERMUTATION = 2,
  PPM_STATUS_INVALID_ARGUMENT = 3,
  PPM_STATUS_OVERFLOW = 4,
  PPM_STATUS_PANIC = 5,
} PpmStatus;

/**
 * Opaque permutation handle.
 */
typedef struct PpmPermutation PpmPermutation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next call into this library from the same thread.
 */
const char *ppm_last_error(void);

/**
 * Builds a permutation from `len` 1-based values.
 *
 * # Safety
 * `values` must point to `len` readable `size_t`s and `out` must be writable.
 */
enum PpmStatus ppm_permutation_new(const size_t *values, size_t len, struct PpmPermutation **out);

/**
 * Parses one-line notation such as `"2 3 1"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` must be writable.
 */
enum PpmStatus ppm_permutation_parse(const char *text, struct PpmPermutation **out);

/**
 * Length of the permutation, 0 for a null handle.
 *
 * # Safety
 * `perm` must be null or a live handle.
 */
size_t ppm_permutation_len(const struct PpmPermutation *perm);

/**
 * Copies the values into `buf`, which must have room for `ppm_permutation_len` entries.
 *
 * # Safety
 * `perm` must be a live handle and `buf` must point to `cap` writable `size_t`s.
 */
enum PpmStatus ppm_permutation_values(const struct PpmPermutation *perm, size_t *buf, size_t cap);

/**
 * # Safety
 * `perm` must be null or a handle not yet freed.
 */
void ppm_permutation_free(struct PpmPermutation *perm);

/**
 * Decides whether `pattern` occurs in `text`. `strips` is the strip count for
 * `Strips` (0 picks it automatically) and is ignored otherwise.
 *
 * # Safety
 * `text` and `pattern` must be live handles and `out` must be writable.
 */
enum PpmStatus ppm_contains(const struct PpmPermutation *text,
                            const struct PpmPermutation *pattern,
                            enum PpmAlgorithm algo,
                            size_t strips,
                            bool *out);

/**
 * Number of occurrences as a decimal string, released with `ppm_string_free`.
 *
 * # Safety
 * `text` and `pattern` must be live handles and `out` must be writable.
 */
enum PpmStatus ppm_count(const struct PpmPermutation *text,
                         const struct PpmPermutation *pattern,
                         enum PpmAlgorithm algo,
                         char **out);

/**
 * Number of occurrences, or `Overflow` if it does not fit in 64 bits.
 *
 * # Safety
 * `text` and `pattern` must be live handles and `out` must be writable.
 */
enum PpmStatus ppm_count_u64(const struct PpmPermutation *text,
                             const struct PpmPermutation *pattern,
                             enum PpmAlgorithm algo,
                             uint64_t *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ppm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPM_H */
