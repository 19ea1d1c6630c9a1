#ifndef TANGENCY_H
#define TANGENCY_H

/* Generated by cbindgen from crates/tangency-ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TangencyStatus {
  TANGENCY_STATUS_OK = 0,
  TANGENCY_STATUS_NULL_POINTER = 1,
  TANGENCY_STATUS_INVALID_UTF8 = 2,
  TANGENCY_STATUS_PARSE = 3,
  /**
   * Input parsed but violates the family hypotheses.
   */
  TANGENCY_STATUS_INVALID_FAMILY = 4,
  TANGENCY_STATUS_BAD_PARAMETER = 5,
  TANGENCY_STATUS_PANIC = 6,
} TangencyStatus;

/**
 * Opaque family handle.
 */
typedef struct TangencyFamily TangencyFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty if none.
 * Valid until the next failing call on the same thread.
 */
const char *tangency_last_error(void);

/**
 * Parse a family from JSON (`{"curves":[{"id":..,"vertices":[..]}]}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TangencyStatus tangency_family_from_json(const char *json, struct TangencyFamily **out);

/**
 * Build a generated family. `n`/`k` of 0 mean "not given".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum TangencyStatus tangency_generate(const char *name,
                                      size_t n,
                                      size_t k,
                                      uint64_t seed,
                                      struct TangencyFamily **out);

/**
 * # Safety
 * `fam` must come from this library and not be used afterwards. Null is a no-op.
 */
void tangency_family_free(struct TangencyFamily *fam);

/**
 * Number of curves, or 0 for null.
 *
 * # Safety
 * `fam` must be null or a live handle.
 */
size_t tangency_family_len(const struct TangencyFamily *fam);

/**
 * # Safety
 * `fam` must be a live handle; `out` must be writable.
 */
enum TangencyStatus tangency_family_to_json(const struct TangencyFamily *fam, char **out);

/**
 * Validation report as JSON. Returns `InvalidFamily` (with the report still
 * written) when a hypothesis fails.
 *
 * # Safety
 * `fam` must be a live handle; `out` must be writable.
 */
enum TangencyStatus tangency_validate(const struct TangencyFamily *fam, char **out);

/**
 * Number of touching pairs of a valid family.
 *
 * # Safety
 * `fam` must be a live handle; `out` must be writable.
 */
enum TangencyStatus tangency_count_tangencies(const struct TangencyFamily *fam, size_t *out);

/**
 * Full analysis report as JSON; `*all_pass` (optional) is set to 1 when every
 * bound and proposition holds. Invalid families yield `InvalidFamily` and the
 * violations-only report.
 *
 * # Safety
 * `fam` must be a live handle; `out` must be writable; `all_pass` may be null.
 */
enum TangencyStatus tangency_analyze(const struct TangencyFamily *fam,
                                     char **out,
                                     int32_t *all_pass);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void tangency_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TANGENCY_H */
