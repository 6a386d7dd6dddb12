#ifndef SYZREP_H
#define SYZREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Pass as `mu` to use the threshold degree.
#define SYZREP_MU_AUTO -1

// Pass as `lmax` to keep every column degree.
#define SYZREP_LMAX_NONE -1

// Status codes. The first four agree with the command-line exit codes.
typedef enum SyzrepStatus {
  SYZREP_STATUS_OK = 0,
  // Malformed input, parse error or out-of-range argument.
  SYZREP_STATUS_INVALID = 1,
  // A standing hypothesis fails or a stabilization bound was hit.
  SYZREP_STATUS_HYPOTHESIS = 2,
  SYZREP_STATUS_INTERNAL = 3,
  // A required pointer argument was null.
  SYZREP_STATUS_NULL_ARGUMENT = 4,
  // The call produced a result but one of its checks failed. The JSON
  // output is still written.
  SYZREP_STATUS_CHECKS_FAILED = 5,
} SyzrepStatus;

// Opaque handle to a parsed system of forms.
typedef struct SyzrepSystem SyzrepSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a system from its JSON description (fields `field`, `variables`,
// `forms`). On success `*out` owns a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SyzrepStatus syzrep_system_from_json(const char *json, struct SyzrepSystem **out);

// # Safety
// `sys` must come from [`syzrep_system_from_json`] and not be freed twice.
void syzrep_system_free(struct SyzrepSystem *sys);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `sys` must be null or a live handle.
size_t syzrep_system_nvars(const struct SyzrepSystem *sys);

// Common degree of the forms, or 0 for a null handle.
//
// # Safety
// `sys` must be null or a live handle.
uint32_t syzrep_system_degree(const struct SyzrepSystem *sys);

// Threshold report as JSON.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum SyzrepStatus syzrep_analyze(const struct SyzrepSystem *sys, char **out);

// The matrix `M_mu` as JSON. `mu` may be [`SYZREP_MU_AUTO`]; `lmax` may be
// [`SYZREP_LMAX_NONE`].
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum SyzrepStatus syzrep_matrix(const struct SyzrepSystem *sys,
                                int64_t mu,
                                int64_t lmax,
                                char **out);

// Implicit equation extracted from `M_mu`, verified against the forms.
// A `budget` of 0 selects the default number of colex minors.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum SyzrepStatus syzrep_implicitize(const struct SyzrepSystem *sys,
                                     int64_t mu,
                                     size_t budget,
                                     char **out);

// Truncated monomial algebra grids. `task` is one of `lefschetz` (a = n,
// b = m), `signs` (a = n, b = d), `lemme` (a = m, b = t) or `kernel`
// (a = m, b = t, c = N). Unused arguments are ignored.
//
// # Safety
// `task` must be a NUL-terminated string and `out` a valid pointer.
enum SyzrepStatus syzrep_appendix(const char *task, uint32_t a, uint32_t b, uint32_t c, char **out);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next call into the library from the same thread.
const char *syzrep_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void syzrep_string_free(char *s);

// Library version as a static string.
const char *syzrep_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYZREP_H */
