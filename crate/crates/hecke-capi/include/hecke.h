#ifndef HECKE_CAPI_H
#define HECKE_CAPI_H

/* Generated by cbindgen from hecke-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum HeckeStatus {
  // The task ran and every check passed.
  HeckeStatus_Ok = 0,
  // The task ran and at least one check failed.
  HeckeStatus_CheckFailed = 1,
  // The configuration or an argument was rejected.
  HeckeStatus_ConfigError = 2,
  // A null pointer or non-UTF-8 string was passed.
  HeckeStatus_BadArgument = 3,
} HeckeStatus;

// Opaque session: field and precision parameters shared by the tasks
// run through it.
typedef struct HeckeSession HeckeSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; never freed.
const char *hecke_version(void);

// Creates a session. ell = 0 selects rational coefficients. Returns a
// handle through `out`; call `hecke_session_free` when done.
//
// # Safety
// `out` must be a valid pointer to writable memory for one pointer.
enum HeckeStatus hecke_session_new(uintptr_t n,
                                   uint64_t q,
                                   uint64_t ell,
                                   uintptr_t prec,
                                   int64_t window,
                                   struct HeckeSession **out);

// Frees a session created by `hecke_session_new`. Null is ignored.
//
// # Safety
// `session` must be null or a pointer previously returned by
// `hecke_session_new` that has not been freed.
void hecke_session_free(struct HeckeSession *session);

// Runs one task against the session parameters. `task` is the
// whitespace-separated CLI form, e.g. "relations 1,7" or
// "structconst tau1 tau1" or "weyl-identities --n 5". Session
// parameters apply unless the task string overrides them. On success
// (`Ok` or `CheckFailed`) `out_json` receives a JSON report that must
// be released with `hecke_string_free`.
//
// # Safety
// `session` must be a live session handle; `task` a NUL-terminated
// string; `out_json` a valid pointer to writable memory for one
// pointer.
enum HeckeStatus hecke_session_run(const struct HeckeSession *session,
                                   const char *task,
                                   char **out_json);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string pointer returned by this library that
// has not been freed.
void hecke_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HECKE_CAPI_H */
