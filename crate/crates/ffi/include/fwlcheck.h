/* fwlcheck C ABI — generated by cbindgen, do not edit. */

#ifndef FWLCHECK_H
#define FWLCHECK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of an API call. `FWL_STATUS_OK` is zero; everything else is an
// error whose detail is available from `fwl_last_error()`.
typedef enum FwlStatus {
  FWL_STATUS_OK = 0,
  // A required pointer argument was null.
  FWL_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  FWL_STATUS_INVALID_UTF8 = 2,
  // The system or counterexample document does not parse or is
  // semantically invalid.
  FWL_STATUS_BAD_DOCUMENT = 3,
  // The fixed-point format is invalid.
  FWL_STATUS_BAD_FORMAT = 4,
  // The task is inconsistent: property/system mismatch, missing bound
  // or error bound, bad realization parameters, bad grid.
  FWL_STATUS_BAD_TASK = 5,
  // The engine could not decide the task (for example, the exhaustive
  // search space exceeds the budget, or root finding failed).
  FWL_STATUS_ENGINE = 6,
  // The counterexample is structurally sound but cannot be re-executed.
  FWL_STATUS_REPLAY = 7,
  // An internal invariant failed; the library state is unharmed but the
  // call produced nothing.
  FWL_STATUS_PANIC = 8,
} FwlStatus;

// Overflow policy of the fixed-point format.
typedef enum FwlOverflowMode {
  FWL_OVERFLOW_MODE_WRAP = 0,
  FWL_OVERFLOW_MODE_SATURATE = 1,
} FwlOverflowMode;

// Rounding policy applied when products are rescaled.
typedef enum FwlRounding {
  FWL_ROUNDING_FLOOR = 0,
  FWL_ROUNDING_NEAREST_EVEN = 1,
} FwlRounding;

// Realization structure simulated by the bounded properties.
typedef enum FwlRealization {
  FWL_REALIZATION_DFI = 0,
  FWL_REALIZATION_DFII = 1,
  FWL_REALIZATION_TDFII = 2,
  FWL_REALIZATION_DDFI = 3,
  FWL_REALIZATION_DDFII = 4,
  FWL_REALIZATION_TDDFII = 5,
} FwlRealization;

// Search strategy for the bounded properties.
typedef enum FwlEngineMode {
  FWL_ENGINE_MODE_EXHAUSTIVE = 0,
  FWL_ENGINE_MODE_RANDOM = 1,
} FwlEngineMode;

// Opaque verification task handle. Create with `fwl_task_new`, release
// with `fwl_task_free`.
typedef struct FwlTask FwlTask;

// Opaque verdict handle returned by `fwl_verify`. Release with
// `fwl_verdict_free`.
typedef struct FwlVerdict FwlVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *fwl_version(void);

// Message describing the most recent failure on this thread. Never null;
// empty when the last call succeeded. Valid until the next fwlcheck call
// on the same thread.
const char *fwl_last_error(void);

// Releases a string returned as `char*` by this library. Null is a no-op.
//
// # Safety
// `s` must be a pointer previously returned by an fwlcheck function that
// documents caller ownership, and must not be used afterwards.
void fwl_string_free(char *s);

// Creates a verification task from a system document and a property name.
//
// `system_json` is the JSON system description; `property` is one of
// `stability`, `minimum-phase`, `overflow`, `limit-cycle`,
// `quantization-error`, `closed-stability`, `closed-limit-cycle`,
// `closed-quantization-error`, `ss-stability`, `ss-controllability`,
// `ss-observability`, `ss-quantization-error`. `intbits`/`fracbits` give
// the fixed-point format, which starts with wrap overflow and floor
// rounding; use the setters to change policies, range, bound, tolerance,
// realization and engine before calling `fwl_verify`.
//
// Returns null on failure (see `fwl_last_error`). Release with
// `fwl_task_free`.
//
// # Safety
// `system_json` and `property` must be valid NUL-terminated strings.
struct FwlTask *fwl_task_new(const char *system_json,
                             const char *property,
                             uint32_t intbits,
                             uint32_t fracbits);

// Releases a task handle. Null is a no-op.
//
// # Safety
// `t` must be a pointer from `fwl_task_new` not yet freed.
void fwl_task_free(struct FwlTask *t);

// Restricts the stimulus dynamic range to `[min, max]` (both representable
// values are included). Applies to the inputs and searched initial states
// of the bounded properties.
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_dynamic_range(struct FwlTask *t, double min, double max);

// Sets the overflow policy (default: wrap).
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_overflow_mode(struct FwlTask *t, enum FwlOverflowMode mode);

// Sets the rounding policy (default: floor).
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_rounding(struct FwlTask *t, enum FwlRounding rounding);

// Sets the realization structure (default: DFI). `delta` must point to
// the delta-operator parameter for the delta realizations and must be
// null for the shift realizations.
//
// # Safety
// `t` must be a live task handle; `delta` is either null or a valid
// pointer for the duration of the call.
enum FwlStatus fwl_task_set_realization(struct FwlTask *t,
                                        enum FwlRealization form,
                                        const double *delta);

// Sets the step bound `k` explored by the bounded properties. Required
// (nonzero) for them, ignored by the analytic ones.
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_bound(struct FwlTask *t, uint64_t bound);

// Sets the output-error tolerance used by the quantization-error
// properties.
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_error_bound(struct FwlTask *t, double eps);

// Chooses the search engine (default: exhaustive, which refuses spaces
// above its budget). `samples` and `seed` configure the random engine and
// are ignored by the exhaustive one.
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_engine(struct FwlTask *t,
                                   enum FwlEngineMode mode,
                                   uint64_t samples,
                                   uint64_t seed);

// Sets the stimulus grid stride in real units (default: every
// representable value in the dynamic range). Pass a stride of 0 to reset
// to the default.
//
// # Safety
// `t` must be a live task handle.
enum FwlStatus fwl_task_set_grid(struct FwlTask *t, double stride);

// Runs the task and stores a verdict handle in `*out` on success. The
// verdict reports whether the property holds and, when it does not,
// carries the counterexample.
//
// # Safety
// `t` must be a live task handle; `out` must be a valid location to store
// a pointer.
enum FwlStatus fwl_verify(const struct FwlTask *t, struct FwlVerdict **out);

// Releases a verdict handle. Null is a no-op.
//
// # Safety
// `v` must be a pointer from `fwl_verify` not yet freed.
void fwl_verdict_free(struct FwlVerdict *v);

// True when the property holds (the run printed no counterexample).
//
// # Safety
// `v` must be a live verdict handle.
bool fwl_verdict_passed(const struct FwlVerdict *v);

// Canonical name of the verified property. Owned by the verdict handle.
//
// # Safety
// `v` must be a live verdict handle; the string is valid until the handle
// is freed.
const char *fwl_verdict_property(const struct FwlVerdict *v);

// Completeness claim of the run, e.g. `exhaustive to bound 8` or
// `bounded, sampled`. Owned by the verdict handle.
//
// # Safety
// `v` must be a live verdict handle; the string is valid until the handle
// is freed.
const char *fwl_verdict_label(const struct FwlVerdict *v);

// Number of candidates in (exhaustive) or drawn from (random) the search
// space; 1 for analytic checks. Saturates at `UINT64_MAX`.
//
// # Safety
// `v` must be a live verdict handle.
uint64_t fwl_verdict_candidates(const struct FwlVerdict *v);

// Simulator steps executed by the search (informational).
//
// # Safety
// `v` must be a live verdict handle.
uint64_t fwl_verdict_steps(const struct FwlVerdict *v);

// Wall-clock milliseconds the decision took.
//
// # Safety
// `v` must be a live verdict handle.
uint64_t fwl_verdict_wall_ms(const struct FwlVerdict *v);

// The counterexample as pretty-printed JSON, or null when the property
// holds. The returned string is owned by the caller: release it with
// `fwl_string_free`.
//
// # Safety
// `v` must be a live verdict handle.
char *fwl_verdict_counterexample_json(const struct FwlVerdict *v);

// Re-executes a counterexample document. On success stores true in
// `*confirmed` when the recorded violation recurred bit-for-bit and false
// when the evidence was refuted.
//
// # Safety
// `ce_json` must be a valid NUL-terminated string; `confirmed` must be a
// valid location to store a bool.
enum FwlStatus fwl_replay_json(const char *ce_json, bool *confirmed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FWLCHECK_H */
