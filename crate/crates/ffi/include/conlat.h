#ifndef CONLAT_H
#define CONLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ConlatStatus {
  CONLAT_STATUS_OK = 0,
  CONLAT_STATUS_NULL_POINTER = 1,
  CONLAT_STATUS_INVALID_UTF8 = 2,
  CONLAT_STATUS_PARSE_ERROR = 3,
  CONLAT_STATUS_INVALID_INPUT = 4,
  CONLAT_STATUS_CHECK_FAILED = 5,
  CONLAT_STATUS_INTERNAL = 6,
} ConlatStatus;

typedef enum ConlatStyle {
  CONLAT_STYLE_FIRST = 0,
  CONLAT_STYLE_SECOND = 1,
  CONLAT_STYLE_COMBINED = 2,
} ConlatStyle;

/**
 * Opaque semilattice-with-operators instance.
 */
typedef struct ConlatInstance ConlatInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread; do not free.
 */
const char *conlat_last_error_message(void);

/**
 * Parses the text input format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum ConlatStatus conlat_instance_parse(const char *text, struct ConlatInstance **out);

/**
 * Loads a built-in instance fixture such as `s22-swap` or `omega-4`.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum ConlatStatus conlat_instance_fixture(const char *name, struct ConlatInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from this library not yet freed.
 */
void conlat_instance_free(struct ConlatInstance *inst);

/**
 * Carrier size of the semilattice.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum ConlatStatus conlat_instance_size(const struct ConlatInstance *inst, size_t *out);

/**
 * Number of elements of the operator monoid, identity included.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum ConlatStatus conlat_monoid_size(const struct ConlatInstance *inst, size_t *out);

/**
 * Number of congruences.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum ConlatStatus conlat_congruence_count(const struct ConlatInstance *inst, size_t *out);

/**
 * Number of eon relations.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum ConlatStatus conlat_eon_count(const struct ConlatInstance *inst, size_t *out);

/**
 * Number of ideals of the semilattice.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum ConlatStatus conlat_ideal_count(const struct ConlatInstance *inst, size_t *out);

/**
 * Renders a presentation in the text grammar. First and second styles
 * ignore the operators.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer. The result must
 * be released with [`conlat_string_free`].
 */
enum ConlatStatus conlat_present(const struct ConlatInstance *inst,
                                 enum ConlatStyle style,
                                 char **out);

/**
 * Runs the combined free-structure pipeline. The `CHECK` report is written
 * to `out` whenever the pipeline runs; the status is `CHECK_FAILED` if any
 * check fails.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer. The result must
 * be released with [`conlat_string_free`].
 */
enum ConlatStatus conlat_verify_combined(const struct ConlatInstance *inst, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void conlat_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONLAT_H */
