#pragma once

/* This file is generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Intensity bracket of one document.
 */
typedef enum PmcLevel {
  PMC_LEVEL_LOW = 0,
  PMC_LEVEL_ACCEPTABLE = 1,
  PMC_LEVEL_GOOD = 2,
  PMC_LEVEL_PERFECT = 3,
} PmcLevel;

/**
 * Result of every API call.
 */
typedef enum PmcStatus {
  /**
   * The call succeeded.
   */
  PMC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PMC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PMC_STATUS_INVALID_UTF8 = 2,
  /**
   * Input failed validation (bad path, malformed file, unknown id).
   */
  PMC_STATUS_VALIDATION = 3,
  /**
   * Computation failed on valid input.
   */
  PMC_STATUS_COMPUTATION = 4,
  /**
   * An index argument was out of range.
   */
  PMC_STATUS_OUT_OF_BOUNDS = 5,
  /**
   * The library caught an internal panic.
   */
  PMC_STATUS_PANIC = 6,
} PmcStatus;

/**
 * Opaque result collection handle.
 */
typedef struct PmcResults PmcResults;

/**
 * Opaque indicator schema handle.
 */
typedef struct PmcSchema PmcSchema;

/**
 * Opaque scorecard collection handle.
 */
typedef struct PmcScorecards PmcScorecards;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *pmc_version(void);

/**
 * Message for the most recent failure on this thread, or null if none.
 * The returned string is a copy; release it with `pmc_string_free`.
 */
char *pmc_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `ptr` must have been returned by this library and not freed before.
 */
void pmc_string_free(char *ptr);

/**
 * Load the built-in indicator schema.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PmcStatus pmc_schema_builtin(struct PmcSchema **out);

/**
 * Load an indicator schema from a TOML file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum PmcStatus pmc_schema_load(const char *path, struct PmcSchema **out);

/**
 * Release a schema handle. Null is ignored.
 *
 * # Safety
 * `schema` must be null or an unreleased handle from this library.
 */
void pmc_schema_free(struct PmcSchema *schema);

/**
 * Number of main variables in the schema.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_schema_main_count(const struct PmcSchema *schema, size_t *out);

/**
 * Identifier of the main variable at `index`; release with `pmc_string_free`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_schema_main_id(const struct PmcSchema *schema, size_t index, char **out);

/**
 * Load scorecards from CSV, validated against the schema.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_scorecards_load(const char *path,
                                   const struct PmcSchema *schema,
                                   struct PmcScorecards **out);

/**
 * Release a scorecard handle. Null is ignored.
 *
 * # Safety
 * `cards` must be null or an unreleased handle from this library.
 */
void pmc_scorecards_free(struct PmcScorecards *cards);

/**
 * Number of documents covered by the scorecards.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_scorecards_len(const struct PmcScorecards *cards, size_t *out);

/**
 * Score every document against the schema.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_score(const struct PmcSchema *schema,
                         const struct PmcScorecards *cards,
                         struct PmcResults **out);

/**
 * Release a result handle. Null is ignored.
 *
 * # Safety
 * `results` must be null or an unreleased handle from this library.
 */
void pmc_results_free(struct PmcResults *results);

/**
 * Number of scored documents.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_len(const struct PmcResults *results, size_t *out);

/**
 * Document id at `index`; release with `pmc_string_free`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_doc_id(const struct PmcResults *results, size_t index, char **out);

/**
 * Index value for the document at `index`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_pmc(const struct PmcResults *results, size_t index, double *out);

/**
 * Guarantee intensity for the document at `index`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_g(const struct PmcResults *results, size_t index, double *out);

/**
 * Intensity bracket for the document at `index`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_level(const struct PmcResults *results,
                                 size_t index,
                                 enum PmcLevel *out);

/**
 * Number of main-variable values for the document at `index`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_main_count(const struct PmcResults *results, size_t index, size_t *out);

/**
 * Value of the `main_index`-th main variable for the document at `index`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_main_value(const struct PmcResults *results,
                                      size_t index,
                                      size_t main_index,
                                      double *out);

/**
 * Full results table as CSV; release with `pmc_string_free`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum PmcStatus pmc_results_csv(const struct PmcResults *results, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
