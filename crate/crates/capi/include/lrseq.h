#ifndef LRSEQ_H
#define LRSEQ_H

/* Generated by cbindgen from the lrseq-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code returned by every fallible function in this library.
 */
typedef enum LrsStatus {
  /**
   * The call succeeded.
   */
  LRS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LRS_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LRS_STATUS_INVALID_UTF8 = 2,
  /**
   * Expression or JSON input could not be parsed.
   */
  LRS_STATUS_SYNTAX_ERROR = 3,
  /**
   * Input parsed but violates a documented precondition.
   */
  LRS_STATUS_INVALID_INPUT = 4,
  /**
   * No refutation exists: the candidate is consistent with the data.
   * This is an answer, not an error.
   */
  LRS_STATUS_NOT_REFUTED = 5,
  /**
   * The certificate failed verification; the message names the first
   * check that failed.
   */
  LRS_STATUS_CERTIFICATE_REJECTED = 6,
  /**
   * A search or precision cap ran out before an answer was reached.
   */
  LRS_STATUS_CAP_EXCEEDED = 7,
  /**
   * A panic was caught at the boundary. Memory is intact but the
   * operation produced nothing.
   */
  LRS_STATUS_INTERNAL_PANIC = 8,
} LrsStatus;

/**
 * Opaque handle to a weight sequence (the gamma of a Lambert series).
 */
typedef struct LrsGamma LrsGamma;

/**
 * Opaque handle to a rational generating function.
 */
typedef struct LrsRational LrsRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *lrs_version(void);

/**
 * Copy of the message from the most recent failure on this thread, or null
 * if the last fallible call on this thread succeeded. Free the copy with
 * [`lrs_string_free`].
 */
char *lrs_last_error(void);

/**
 * Release a string returned by this library. `s` may be null.
 *
 * # Safety
 * `s` must have been returned by an `lrs_` function and not freed already.
 */
void lrs_string_free(char *s);

/**
 * Parse an expression like `"z^4/(1-z^2)+z^9/(1-z^3)"` into a rational
 * function handle. On success `*out` owns the handle; release it with
 * [`lrs_rational_free`].
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_parse(const char *text, struct LrsRational **out);

/**
 * Build a rational function handle from its JSON form
 * `{"num": [...], "den": [...]}` (coefficient lists, lowest degree first).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_from_json(const char *json, struct LrsRational **out);

/**
 * Serialize a rational function handle to canonical compact JSON.
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_to_json(const struct LrsRational *h, char **out);

/**
 * Release a rational function handle. `h` may be null.
 *
 * # Safety
 * `h` must have come from this library and not be freed twice.
 */
void lrs_rational_free(struct LrsRational *h);

/**
 * First `count` Taylor coefficients of the rational function, as a JSON
 * array of exact rationals (strings like `"3/2"` or plain integers).
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_expand(const struct LrsRational *h, size_t count, char **out);

/**
 * Describe the zero set of the coefficient sequence: full residue classes
 * mod the ratio-order modulus plus sporadic zeros up to `bound`, with
 * completeness flags. `max_bits` caps the root-isolation precision; pass 0
 * for the default (4096).
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_zero_set(const struct LrsRational *h,
                                     uint64_t bound,
                                     uint32_t max_bits,
                                     char **out);

/**
 * Split the rational function into a polynomial part plus proper-power
 * folds `H_d(z^d)`, or report why no such splitting exists. Primes up to
 * `prime_bound` are tried as witnesses; pass 0 for the default (1000).
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_decompose(const struct LrsRational *h,
                                      uint64_t prime_bound,
                                      char **out);

/**
 * Report which residue classes carry a dominant pole relation. `max_bits`
 * caps the root-isolation precision; pass 0 for the default (4096).
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_rational_dominant(const struct LrsRational *h, uint32_t max_bits, char **out);

/**
 * Build a weight sequence handle from JSON: either
 * `{"recurrence": {...}}` or `{"support": {"4": "1", ...}}`. Release with
 * [`lrs_gamma_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid writable slot.
 */
enum LrsStatus lrs_gamma_from_json(const char *json, struct LrsGamma **out);

/**
 * Serialize a weight sequence handle back to canonical compact JSON.
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_gamma_to_json(const struct LrsGamma *h, char **out);

/**
 * Release a weight sequence handle. `h` may be null.
 *
 * # Safety
 * `h` must have come from this library and not be freed twice.
 */
void lrs_gamma_free(struct LrsGamma *h);

/**
 * Weight values `gamma_1 .. gamma_count` as a JSON array.
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_gamma_terms(const struct LrsGamma *h, size_t count, char **out);

/**
 * Divisor sums `b_m = sum over d | m of gamma_d` for `m = 1 .. count`,
 * i.e. the Taylor coefficients of the Lambert series of the weights, as a
 * JSON array.
 *
 * # Safety
 * `h` must be a live handle from this library; `out` a valid writable slot.
 */
enum LrsStatus lrs_gamma_divisor_sums(const struct LrsGamma *h, size_t count, char **out);

/**
 * Try to refute the claim that `candidate_json` (a recurrence object
 * `{"coeffs": [...], "initial": [...], "start_index": n, "first_index": 1}`,
 * indexed from 1) generates the divisor sums of the weights. On success
 * writes a certificate as JSON.
 * Returns `NotRefuted` when the claim survives — the weights have no
 * recurrent part, so no contradiction exists. `witness_cap` bounds the
 * witness search; pass 0 for the default (256).
 *
 * # Safety
 * `gamma` must be a live handle from this library, `candidate_json` a
 * NUL-terminated string, and `out` a valid writable slot.
 */
enum LrsStatus lrs_refute(const struct LrsGamma *gamma,
                          const char *candidate_json,
                          uint64_t witness_cap,
                          char **out);

/**
 * Check a refutation certificate against the weights and candidate it
 * claims to refute. Returns `Ok` when every field replays;
 * `CertificateRejected` (with the failed check named in the error message)
 * when any does not.
 *
 * # Safety
 * `cert_json` and `candidate_json` must be NUL-terminated strings and
 * `gamma` a live handle from this library.
 */
enum LrsStatus lrs_verify(const char *cert_json,
                          const struct LrsGamma *gamma,
                          const char *candidate_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LRSEQ_H */
