#ifndef SADIC_H
#define SADIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum SadicStatus {
  SADIC_STATUS_OK = 0,
  SADIC_STATUS_NULL_POINTER = 1,
  SADIC_STATUS_INVALID_UTF8 = 2,
  SADIC_STATUS_CONFIG_ERROR = 3,
  SADIC_STATUS_PRECONDITION_VIOLATED = 4,
  SADIC_STATUS_PANIC = 5,
} SadicStatus;

/**
 * Parsed system configuration. Opaque to C.
 */
typedef struct SadicSystem SadicSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses config text into a new system handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SadicStatus sadic_system_from_config(const char *text, struct SadicSystem **out);

/**
 * Releases a handle from `sadic_system_from_config`. Null is ignored.
 *
 * # Safety
 * `sys` must come from `sadic_system_from_config` and not be freed twice.
 */
void sadic_system_free(struct SadicSystem *sys);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sadic_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library from this thread.
 */
const char *sadic_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sadic_version(void);

/**
 * Full verify report as JSON.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SadicStatus sadic_verify_json(const struct SadicSystem *sys, char **out);

/**
 * Balance certificate of the language shifted by `shift`, up to length `maxlen`.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SadicStatus sadic_balance_json(const struct SadicSystem *sys,
                                    size_t shift,
                                    size_t maxlen,
                                    char **out);

/**
 * Strong-coincidence verdict up to `cap`.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SadicStatus sadic_coincidence_json(const struct SadicSystem *sys, size_t cap, char **out);

/**
 * Generalized right eigenvector with the config's depth and tolerance.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SadicStatus sadic_eigen_json(const struct SadicSystem *sys, char **out);

/**
 * Lyapunov estimate for the config's model.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum SadicStatus sadic_lyapunov_json(const struct SadicSystem *sys,
                                     size_t length,
                                     size_t samples,
                                     uint64_t seed,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SADIC_H */
