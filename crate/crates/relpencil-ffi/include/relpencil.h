#ifndef RELPENCIL_H
#define RELPENCIL_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define RELPENCIL_OK 0

/**
 * Malformed input: bad JSON, bad UTF-8, null pointer, shape violations.
 */
#define RELPENCIL_ERR_INPUT 2

/**
 * Eigenvalue discovery left unresolved factors.
 */
#define RELPENCIL_ERR_UNRESOLVED 3

/**
 * Internal invariant violation (cross-checks disagree).
 */
#define RELPENCIL_ERR_INTERNAL 4

/**
 * Opaque parsed pencil.
 */
typedef struct RelpencilPencil RelpencilPencil;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Release a string returned by any function of this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through an output parameter of
 * this library, or null.
 */
void relpencil_string_free(char *s);

/**
 * Weyr characteristic of a linear relation. `relation_json` is
 * {"m": ..., "basis": matrix}; writes WeyrCharacteristic JSON to `out`.
 *
 * # Safety
 * `relation_json` must be a valid NUL-terminated string; `out` must be null
 * or a valid pointer slot.
 */
int32_t relpencil_weyr_relation(const char *relation_json, char **out);

/**
 * Weyr characteristic and Kronecker invariants of a pencil.
 * `pencil_json` is {"n", "m", "E", "F"}; `representation` is "kernel",
 * "range", "both", or null (= "both").
 *
 * # Safety
 * Pointers must be valid as in [`relpencil_weyr_relation`];
 * `representation` may be null.
 */
int32_t relpencil_weyr_pencil(const char *pencil_json, const char *representation, char **out);

/**
 * Assemble the Kronecker canonical pencil from invariants JSON
 * {"finite", "alpha", "beta", "gamma"}; writes Pencil JSON.
 *
 * # Safety
 * As in [`relpencil_weyr_relation`].
 */
int32_t relpencil_build_kronecker(const char *invariants_json, char **out);

/**
 * Strict equivalence of two pencils; writes {"equivalent": bool}.
 *
 * # Safety
 * As in [`relpencil_weyr_relation`].
 */
int32_t relpencil_equiv(const char *pencil_json_1, const char *pencil_json_2, char **out);

/**
 * Smith invariant factors of sE - F; writes
 * {"invariant_factors": [[coefficient strings]], "display": [strings]}.
 *
 * # Safety
 * As in [`relpencil_weyr_relation`].
 */
int32_t relpencil_smith(const char *pencil_json, char **out);

/**
 * Rank-one perturbation bound report for pencils P and Q; writes
 * BoundReport JSON.
 *
 * # Safety
 * As in [`relpencil_weyr_relation`].
 */
int32_t relpencil_perturb_report(const char *pencil_json_p, const char *pencil_json_q, char **out);

/**
 * Seeded randomized perturbation trials; deterministic per seed. Writes the
 * TrialSummary JSON.
 *
 * # Safety
 * `out` must be null or a valid pointer slot.
 */
int32_t relpencil_perturb_trials(uintptr_t trials, uintptr_t max_size, uint64_t seed, char **out);

/**
 * Parse a pencil into an opaque handle for repeated use. On success writes
 * the handle to `out_handle`; release it with [`relpencil_pencil_free`].
 *
 * # Safety
 * `pencil_json` as in [`relpencil_weyr_relation`]; `out_handle` must be a
 * valid pointer slot; `out_error` may be null.
 */
int32_t relpencil_pencil_parse(const char *pencil_json,
                               struct RelpencilPencil **out_handle,
                               char **out_error);

/**
 * Release a pencil handle.
 *
 * # Safety
 * `handle` must come from [`relpencil_pencil_parse`], or be null.
 */
void relpencil_pencil_free(struct RelpencilPencil *handle);

/**
 * Row count of the pencil behind a handle (0 for null).
 *
 * # Safety
 * `handle` must be valid or null.
 */
uintptr_t relpencil_pencil_rows(const struct RelpencilPencil *handle);

/**
 * Column count of the pencil behind a handle (0 for null).
 *
 * # Safety
 * `handle` must be valid or null.
 */
uintptr_t relpencil_pencil_cols(const struct RelpencilPencil *handle);

/**
 * Weyr characteristic + invariants for a pencil handle; `representation`
 * as in [`relpencil_weyr_pencil`].
 *
 * # Safety
 * `handle` must be valid; other pointers as in [`relpencil_weyr_pencil`].
 */
int32_t relpencil_pencil_weyr(const struct RelpencilPencil *handle,
                              const char *representation,
                              char **out);

/**
 * Strict equivalence of two pencil handles; writes 1 or 0 to `out_equal`.
 *
 * # Safety
 * Handles must be valid; `out_equal` must be a valid pointer slot;
 * `out_error` may be null.
 */
int32_t relpencil_pencil_equiv(const struct RelpencilPencil *handle_1,
                               const struct RelpencilPencil *handle_2,
                               int32_t *out_equal,
                               char **out_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELPENCIL_H */
