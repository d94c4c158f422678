#ifndef UNIRIGID_H
#define UNIRIGID_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum UrStatus {
  UR_STATUS_OK = 0,
  UR_STATUS_PARAMETER = 1,
  UR_STATUS_DIVISION_BY_ZERO = 2,
  UR_STATUS_DOMAIN = 3,
  UR_STATUS_WINDOW = 4,
  UR_STATUS_HYPOTHESIS = 5,
  UR_STATUS_UNSUPPORTED = 6,
  UR_STATUS_RESOURCE = 7,
  UR_STATUS_NOT_CONFORMAL = 8,
  UR_STATUS_INCONSISTENT = 9,
  UR_STATUS_USAGE = 10,
  UR_STATUS_NULL_POINTER = 11,
  UR_STATUS_INVALID_UTF8 = 12,
  UR_STATUS_JSON = 13,
  UR_STATUS_BUFFER_TOO_SMALL = 14,
  UR_STATUS_PANIC = 15,
} UrStatus;

// A finite field F_q.
typedef struct UrField UrField;

// A polynomial in t^{-1} over the field it was created with.
typedef struct UrPol UrPol;

// The outcome of a suite run.
typedef struct UrReport UrReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or "" after a success.
// The pointer stays valid until the next call on the same thread.
const char *ur_last_error(void);

// Library version as a static string.
const char *ur_version(void);

// Creates F_q with q = p^d.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum UrStatus ur_field_new(uint32_t p, uint32_t d, struct UrField **out);

// # Safety
// `field` must be null or a handle from `ur_field_new` not yet freed.
void ur_field_free(struct UrField *field);

// Field size q, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uint32_t ur_field_q(const struct UrField *field);

// Builds a polynomial from `len` coefficient indices. Each index must be
// below q.
//
// # Safety
// `coeffs` must point to `len` readable values (it may be null when `len`
// is 0); `field` must be live and `out` writable.
enum UrStatus ur_pol_new(const struct UrField *field,
                         const uint32_t *coeffs,
                         size_t len,
                         struct UrPol **out);

// # Safety
// `pol` must be null or a live handle.
void ur_pol_free(struct UrPol *pol);

// Degree in t^{-1}; -1 for the zero polynomial.
//
// # Safety
// `pol` must be live and `out` writable.
enum UrStatus ur_pol_degree(const struct UrPol *pol, int64_t *out);

// Copies the coefficient indices into `buf`. `len` always receives the
// number of coefficients; if `cap` is too small nothing is copied and
// `BufferTooSmall` is returned.
//
// # Safety
// `buf` must have room for `cap` values (or be null with `cap` 0); `pol`
// must be live and `len` writable.
enum UrStatus ur_pol_coeffs(const struct UrPol *pol, uint32_t *buf, size_t cap, size_t *len);

// The bracket ⟨a, b⟩ = a^e·b − a·b^e; `e` must be 1 or a power of p.
//
// # Safety
// All handles must be live and `out` writable.
enum UrStatus ur_pol_bracket(const struct UrField *field,
                             uint64_t e,
                             const struct UrPol *a,
                             const struct UrPol *b,
                             struct UrPol **out);

// Whether b/a is an e-th power in F_q(t). Both must be nonzero.
//
// # Safety
// All handles must be live and `out` writable.
enum UrStatus ur_eth_power_ratio(const struct UrField *field,
                                 const struct UrPol *a,
                                 const struct UrPol *b,
                                 uint64_t e,
                                 bool *out);

// Whether every irreducible factor of `a` has multiplicity below `qq`,
// a power of p.
//
// # Safety
// All handles must be live and `out` writable.
enum UrStatus ur_is_q_separable(const struct UrField *field,
                                const struct UrPol *a,
                                uint64_t qq,
                                bool *out);

// Runs a named suite. `config_json` is an experiment configuration in JSON;
// missing keys (or a null pointer) take the defaults.
//
// # Safety
// `suite` must be a NUL-terminated string, `config_json` null or one, and
// `out` writable.
enum UrStatus ur_run_suite(const char *suite, const char *config_json, struct UrReport **out);

// # Safety
// `report` must be null or a live handle.
void ur_report_free(struct UrReport *report);

// Number of passing instances and of all instances.
//
// # Safety
// `report` must be live; `passed` and `total` writable.
enum UrStatus ur_report_counts(const struct UrReport *report, size_t *passed, size_t *total);

// The report as JSONL text (one record per line, then a summary line).
// Free the string with `ur_string_free`.
//
// # Safety
// `report` must be live and `out` writable.
enum UrStatus ur_report_jsonl(const struct UrReport *report, char **out);

// Solves a deck given as JSON. `kind` is "g2", "heis" or "hp"; the
// solution is returned as JSON text to be freed with `ur_string_free`.
//
// # Safety
// `kind` and `deck_json` must be NUL-terminated strings, `out` writable.
enum UrStatus ur_solve(const char *kind, const char *deck_json, char **out);

// Frees a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void ur_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNIRIGID_H */
