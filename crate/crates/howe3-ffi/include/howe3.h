#ifndef HOWE3_H
#define HOWE3_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Howe3Extremality {
  /**
   * Use the extremality the report's kind predicts.
   */
  HOWE3_EXTREMALITY_EXPECTED = 0,
  HOWE3_EXTREMALITY_MAXIMAL = 1,
  HOWE3_EXTREMALITY_MINIMAL = 2,
} Howe3Extremality;

typedef enum Howe3Kind {
  HOWE3_KIND_HOWE_TYPE = 0,
  HOWE3_KIND_OORT_TYPE = 1,
  HOWE3_KIND_QUARTIC = 2,
} Howe3Kind;

/**
 * Result codes. Values 2 and 3 agree with the command line exit codes.
 */
typedef enum Howe3Status {
  HOWE3_STATUS_OK = 0,
  HOWE3_STATUS_NULL_ARGUMENT = 1,
  HOWE3_STATUS_INVALID_INPUT = 2,
  HOWE3_STATUS_LIMIT_EXCEEDED = 3,
  HOWE3_STATUS_INTERNAL = 4,
} Howe3Status;

/**
 * Opaque parsed curve.
 */
typedef struct Howe3Curve Howe3Curve;

/**
 * Opaque class report.
 */
typedef struct Howe3Report Howe3Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library from the same thread.
 */
const char *howe3_last_error(void);

/**
 * Enumerates the classes of one kind. `kind` is a `Howe3Kind` value;
 * `workers` = 0 means one worker.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum Howe3Status howe3_enumerate(uint64_t p,
                                 uint32_t kind,
                                 uint32_t workers,
                                 struct Howe3Report **out);

/**
 * Parses a report from JSON (a bare report or a full command document).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum Howe3Status howe3_report_from_json(const char *json, struct Howe3Report **out);

/**
 * # Safety
 * `r` must come from this library and not be used afterwards. NULL is ignored.
 */
void howe3_report_free(struct Howe3Report *r);

/**
 * Number of classes in the report, or 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live report handle.
 */
uint64_t howe3_report_total(const struct Howe3Report *r);

/**
 * Characteristic of the report, or 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live report handle.
 */
uint64_t howe3_report_p(const struct Howe3Report *r);

/**
 * Classes (or, with `triples` nonzero, admissible triples) in a group
 * such as "V4" or "S4"; hyperelliptic reports have the single group "total".
 *
 * # Safety
 * `r` must be a live handle, `group` a nul-terminated string, `out` writable.
 */
enum Howe3Status howe3_report_tally(const struct Howe3Report *r,
                                    const char *group,
                                    uint32_t triples,
                                    uint64_t *out);

/**
 * Tagged curve text of class `index`, accepted by [`howe3_curve_parse`].
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum Howe3Status howe3_report_curve(const struct Howe3Report *r, size_t index, char **out);

/**
 * Serializes the report as JSON.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum Howe3Status howe3_report_to_json(const struct Howe3Report *r, char **out);

/**
 * Counts points of every class over the field where it should be extremal.
 * Sets `*all_ok` to 1 when every class has the extremal count, else 0.
 *
 * # Safety
 * `r` must be a live handle and `all_ok` writable.
 */
enum Howe3Status howe3_report_verify_extremality(const struct Howe3Report *r,
                                                 uint32_t mode,
                                                 uint32_t *all_ok);

/**
 * Decides whether a class of the given kind exists. `*found` is set to 1 or
 * 0; when `witness` is not NULL and a class exists, its curve text is
 * written there.
 *
 * # Safety
 * `found` must be writable; `witness` NULL or writable.
 */
enum Howe3Status howe3_exists(uint64_t p, uint32_t kind, uint32_t *found, char **witness);

/**
 * Parses a curve in the command line's curve file format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum Howe3Status howe3_curve_parse(const char *text, struct Howe3Curve **out);

/**
 * # Safety
 * `c` must come from this library and not be used afterwards. NULL is ignored.
 */
void howe3_curve_free(struct Howe3Curve *c);

/**
 * Invariants of the curve as a JSON object.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum Howe3Status howe3_curve_invariants_json(const struct Howe3Curve *c, char **out);

/**
 * Richelot codomains of a genus-2 curve as a JSON object.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum Howe3Status howe3_curve_richelot_json(const struct Howe3Curve *c, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void howe3_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOWE3_H */
