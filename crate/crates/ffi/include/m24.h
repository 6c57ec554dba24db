#ifndef M24_H
#define M24_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum M24Status {
  M24_STATUS_OK = 0,
  // A required pointer argument was null.
  M24_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  M24_STATUS_INVALID_UTF8 = 2,
  // Unknown kind, module, suite or class, or an out-of-range order.
  M24_STATUS_USAGE = 3,
  // The group data failed to load or validate.
  M24_STATUS_DATA = 4,
  // The computation failed, or a verification record failed.
  M24_STATUS_FAILED = 5,
  // The library panicked; the context is still usable.
  M24_STATUS_PANIC = 6,
} M24Status;

// Opaque per-caller state: the last error message.
typedef struct M24Context M24Context;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// A new context, or null if the group data cannot be loaded.
struct M24Context *m24_context_new(void);

// Releases a context from [`m24_context_new`]. Null is ignored.
//
// # Safety
// `ctx` must be null or a live context, not used afterwards.
void m24_context_free(struct M24Context *ctx);

// The message of the last failed call on `ctx`, empty if none. Valid until the next
// call on `ctx`.
//
// # Safety
// `ctx` must be null or a live context.
const char *m24_last_error(const struct M24Context *ctx);

// Releases a string returned through an `out` argument. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library, not used afterwards.
void m24_string_free(char *s);

// The library version.
const char *m24_version(void);

// Coefficient tables as JSON lines, one object `{kind, class, orders, rows}` per class.
//
// `kind` is `eta-inverse`, `H`, `Z-disc` or `siegel`; `classes` is a series label, a
// comma-separated list or `all`. `order` is the row count, or the largest discriminant
// for `Z-disc`; `p_max`, `q_max` bound the Siegel window.
//
// # Safety
// `ctx` must be a live context, the strings NUL-terminated, `out` writable.
enum M24Status m24_coeffs_json(struct M24Context *ctx,
                               const char *kind,
                               const char *classes,
                               int64_t order,
                               int64_t p_max,
                               int64_t q_max,
                               char **out);

// A decomposition report as one JSON object. `module` is `eta-Fock`, `K` or `Khat`.
// Returns [`M24Status::Failed`] with the report still written to `*out` when some
// multiplicity could not come from an actual module.
//
// # Safety
// As for [`m24_coeffs_json`].
enum M24Status m24_decompose_json(struct M24Context *ctx,
                                  const char *module,
                                  int64_t depth,
                                  char **out);

// Runs a verification suite (`tables`, `identities`, `transforms`, `rademacher`, `all`)
// on the selected classes with default depths, writing JSON lines to `*out` and the
// number of failed records to `*failed`. Returns [`M24Status::Failed`] if any failed.
//
// # Safety
// As for [`m24_coeffs_json`]; `failed` must be writable or null.
enum M24Status m24_verify_json(struct M24Context *ctx,
                               const char *suite,
                               const char *classes,
                               char **out,
                               size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* M24_H */
