#ifndef ENUMIRROR_H
#define ENUMIRROR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum em_status {
  EM_STATUS_OK = 0,
  EM_STATUS_NULL_POINTER = 1,
  EM_STATUS_INVALID_UTF8 = 2,
  EM_STATUS_CONFIG = 3,
  EM_STATUS_UNSUPPORTED_RANK = 4,
  EM_STATUS_OUT_OF_RANGE = 5,
  EM_STATUS_DOMAIN = 6,
  EM_STATUS_BUDGET = 7,
  EM_STATUS_CONVERGENCE = 8,
  EM_STATUS_INCONSISTENCY = 9,
  EM_STATUS_INVALID_CLASS = 10,
  EM_STATUS_NOT_IN_SPAN = 11,
  EM_STATUS_ARITHMETIC = 12,
  EM_STATUS_PANIC = 99,
} em_status;

// Which side of the mirror an invariant lives on.
typedef enum em_role {
  EM_ROLE_SL = 0,
  EM_ROLE_PGL = 1,
} em_role;

// Opaque invariant key.
typedef struct em_key em_key;

// Opaque result of a check run.
typedef struct em_report em_report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or NULL.
// The pointer stays valid until the next call into the library.
const char *em_last_error(void);

// Library version as a static string.
const char *em_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void em_string_free(char *s);

// Creates an invariant key; `d` and `a` must lie in `0..r`.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum em_status em_key_new(enum em_role role,
                          uint32_t r,
                          uint32_t g,
                          uint32_t d,
                          uint32_t a,
                          struct em_key **out);

// # Safety
// `key` must come from [`em_key_new`] and not have been freed already.
void em_key_free(struct em_key *key);

// q-expansion of the invariant up to and including `order`, as JSON:
// `{"terms": [{"exponent": "n" | "n/m", "coeff": "..."}]}`.
//
// # Safety
// `key` must be a live handle and `out` writable.
enum em_status em_key_series_json(const struct em_key *key, int64_t order, char **out);

// Degree-zero coefficient of the invariant as decimal numerator and
// denominator strings.
//
// # Safety
// `key` must be a live handle; `num` and `den` writable.
enum em_status em_key_w0(const struct em_key *key, char **num, char **den);

// Runs checks described by a JSON config (same fields as the CLI, all
// optional; `{}` runs everything at the defaults).
//
// # Safety
// `config_json` must be a NUL-terminated string; `out` writable.
enum em_status em_run(const char *config_json, struct em_report **out);

// # Safety
// `report` must come from [`em_run`] and not have been freed already.
void em_report_free(struct em_report *report);

// Full report as JSON (the CLI's `--report json` output).
//
// # Safety
// `report` must be a live handle; `out` writable.
enum em_status em_report_json(const struct em_report *report, char **out);

// Counts of passing, failing and undecided checks. Any pointer may be NULL.
//
// # Safety
// `report` must be a live handle.
enum em_status em_report_counts(const struct em_report *report,
                                uintptr_t *pass,
                                uintptr_t *fail,
                                uintptr_t *unknown);

// Process exit code the CLI would use: 0 if nothing failed, 1 otherwise.
// Returns -1 for a NULL handle.
//
// # Safety
// `report` must be a live handle or NULL.
int32_t em_report_exit_code(const struct em_report *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENUMIRROR_H */
