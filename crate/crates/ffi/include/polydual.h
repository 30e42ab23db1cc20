#ifndef POLYDUAL_H
#define POLYDUAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, numbers or family structure.
   */
  PD_STATUS_INVALID_INPUT = 3,
  /**
   * Input is well formed but outside the operation's domain.
   */
  PD_STATUS_PRECONDITION = 4,
  /**
   * An iteration, oracle or sampling limit was hit.
   */
  PD_STATUS_LIMIT_EXCEEDED = 5,
  PD_STATUS_INTERNAL = 6,
  PD_STATUS_PANIC = 7,
} PdStatus;

typedef enum PdEvalMode {
  /**
   * Min over members of max over vertices.
   */
  PD_EVAL_MODE_UPPER = 0,
  /**
   * Max over members of min over vertices.
   */
  PD_EVAL_MODE_LOWER = 1,
} PdEvalMode;

/**
 * Opaque family handle.
 */
typedef struct PdFamily PdFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a family from JSON text
 * (`{"dimension": N, "points": [["p/q", ...], ...], "polytopes": [[i, ...], ...]}`).
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum PdStatus pd_family_from_json(const char *json, struct PdFamily **out);

/**
 * Releases a family handle; null is ignored.
 *
 * # Safety
 * `f` must come from this library and not have been freed.
 */
void pd_family_free(struct PdFamily *f);

/**
 * Serializes a family to JSON; free the result with [`pd_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PdStatus pd_family_to_json(const struct PdFamily *f, char **out);

/**
 * Computes the dual family as a new handle.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PdStatus pd_family_dual(const struct PdFamily *f, struct PdFamily **out);

/**
 * Iterates the dual until a family repeats. `n0` receives the index of the
 * first family on the cycle and `k` the cycle length.
 *
 * # Safety
 * `f` must be a live handle; `n0` and `k` must be writable.
 */
enum PdStatus pd_family_iterate(const struct PdFamily *f, size_t max_iter, size_t *n0, size_t *k);

/**
 * Writes the hypothesis report as JSON.
 *
 * # Safety
 * `f` must be a live handle; `report_json` must be writable.
 */
enum PdStatus pd_family_check(const struct PdFamily *f, char **report_json);

/**
 * Computes three successive duals and checks their predicted structure.
 * `bottom_subsets` selects the weaker subset hypothesis. `report_json` may be
 * null when only the verdict is wanted.
 *
 * # Safety
 * `f` must be a live handle; `passed` must be writable; `report_json` must
 * be null or writable.
 */
enum PdStatus pd_family_verify_theorem(const struct PdFamily *f,
                                       bool bottom_subsets,
                                       bool *passed,
                                       char **report_json);

/**
 * Evaluates the family at `point` (comma-separated rationals such as
 * `"1,-1/2"`) and writes the exact value as a string like `"3/4"`.
 *
 * # Safety
 * `f` must be a live handle, `point` nul-terminated, `out` writable.
 */
enum PdStatus pd_family_evaluate(const struct PdFamily *f,
                                 enum PdEvalMode mode,
                                 const char *point,
                                 char **out);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *pd_last_error_message(void);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYDUAL_H */
