#ifndef STIELTJES_H
#define STIELTJES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum StieltjesStatus {
  STIELTJES_STATUS_OK = 0,
  STIELTJES_STATUS_NULL_POINTER = 1,
  STIELTJES_STATUS_INVALID_UTF8 = 2,
  STIELTJES_STATUS_INVALID_SPEC = 3,
  STIELTJES_STATUS_INVALID_ARGUMENT = 4,
  STIELTJES_STATUS_OUT_OF_DOMAIN = 5,
  STIELTJES_STATUS_NOT_POINTWISE = 6,
  STIELTJES_STATUS_INTERNAL = 7,
} StieltjesStatus;

typedef enum StieltjesVerdictKind {
  STIELTJES_VERDICT_KIND_INTEGRABLE = 0,
  STIELTJES_VERDICT_KIND_NOT_INTEGRABLE = 1,
  STIELTJES_VERDICT_KIND_UNDECIDED = 2,
} StieltjesVerdictKind;

/**
 * Opaque function handle.
 */
typedef struct StieltjesFunction StieltjesFunction;

typedef struct StieltjesControls {
  double tol;
  size_t budget;
  double slack;
} StieltjesControls;

/**
 * Outcome of a decision or integration. `mid`/`rad` are set for
 * integrable and undecided verdicts, `gap_floor` for not-integrable ones,
 * `best_gap`/`budget_spent` for undecided ones; unused fields are 0.
 */
typedef struct StieltjesVerdict {
  enum StieltjesVerdictKind kind;
  double mid;
  double rad;
  double gap_floor;
  double best_gap;
  size_t budget_spent;
} StieltjesVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default tolerance, budget and slack.
 */
struct StieltjesControls stieltjes_default_controls(void);

/**
 * Build a function from a NUL-terminated JSON spec on `[lo, hi]`.
 *
 * # Safety
 * `spec_json` must be null or a valid C string; `out` must be null or
 * writable.
 */
enum StieltjesStatus stieltjes_function_new(const char *spec_json,
                                            double lo,
                                            double hi,
                                            struct StieltjesFunction **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle from [`stieltjes_function_new`] that has
 * not been freed.
 */
void stieltjes_function_free(struct StieltjesFunction *f);

/**
 * Value at `x`; on dense-oscillation pieces the off-value.
 *
 * # Safety
 * `f` must be a live handle or null; `out` writable or null.
 */
enum StieltjesStatus stieltjes_eval(const struct StieltjesFunction *f, double x, double *out);

/**
 * Exact infimum and supremum over `[lo, hi]`, which must lie in the domain.
 *
 * # Safety
 * `f` must be a live handle or null; `inf`, `sup` writable or null.
 */
enum StieltjesStatus stieltjes_range(const struct StieltjesFunction *f,
                                     double lo,
                                     double hi,
                                     double *inf,
                                     double *sup);

/**
 * Decide Riemann integrability of `h`. `controls` may be null for the
 * defaults.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum StieltjesStatus stieltjes_decide(const struct StieltjesFunction *h,
                                      const struct StieltjesControls *controls_ptr,
                                      struct StieltjesVerdict *out);

/**
 * Enclose `∫ f dG` with `G = c + ∫ g` through the integral of `f·g`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum StieltjesStatus stieltjes_integrate_rs(const struct StieltjesFunction *f,
                                            const struct StieltjesFunction *g,
                                            double c,
                                            const struct StieltjesControls *controls_ptr,
                                            struct StieltjesVerdict *out);

/**
 * Run the built-in verification corpus.
 *
 * # Safety
 * `passed` and `failed` must be null or writable.
 */
enum StieltjesStatus stieltjes_verify_default(uint64_t seed, size_t *passed, size_t *failed);

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length plus one, or 0 if
 * there is no error.
 *
 * # Safety
 * `buf` must be null or writable for `len` bytes.
 */
size_t stieltjes_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *stieltjes_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STIELTJES_H */
