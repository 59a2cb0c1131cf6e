#ifndef CLOTT_H
#define CLOTT_H

/* generated by cbindgen; edit src/lib.rs instead */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum {
  CLOTT_OK = 0,
  CLOTT_PARSE_ERROR = 1,
  CLOTT_TYPE_ERROR = 2,
  CLOTT_EVAL_ERROR = 3,
  CLOTT_VERIFY_FAILED = 4,
  CLOTT_BAD_ARGUMENT = 5,
} ClottStatus;

/**
 * An opaque parsed judgement.
 */
typedef struct ClottProgram ClottProgram;

/**
 * Parses a judgement file. Returns null on error, with a diagnostic in
 * `error_out` when that is non-null.
 *
 * # Safety
 * `source` must be a valid NUL-terminated UTF-8 string; `error_out`, when
 * non-null, must point to writable storage for one pointer.
 */
ClottProgram *clott_parse(const char *source, char **error_out);

/**
 * Releases a program handle.
 *
 * # Safety
 * `program` must come from `clott_parse` and not be freed twice.
 */
void clott_program_free(ClottProgram *program);

/**
 * Typechecks the judgement; on failure the diagnostics JSON carries the
 * rule name and message.
 *
 * # Safety
 * `program` must be a live handle; `diagnostics_out` as in `clott_parse`.
 */
ClottStatus clott_program_check(const ClottProgram *program, char **diagnostics_out);

/**
 * Evaluates the subject of a typing judgement at a world given as JSON;
 * the value comes back in the documented JSON encoding. `env_json` may be
 * null for closed contexts.
 *
 * # Safety
 * Pointer arguments as in `clott_parse`.
 */
ClottStatus clott_program_eval(const ClottProgram *program,
                               const char *world_json,
                               const char *env_json,
                               char **value_out);

/**
 * Prints the β-normal form of the subject term.
 *
 * # Safety
 * Pointer arguments as in `clott_parse`.
 */
ClottStatus clott_program_normalize(const ClottProgram *program, char **term_out);

/**
 * Runs one lemma suite (or all of them when `suite` is null) at the given
 * truncation; the JSON report lands in `report_out`.
 *
 * # Safety
 * Pointer arguments as in `clott_parse`.
 */
ClottStatus clott_verify(const char *suite,
                         uint32_t max_clocks,
                         uint32_t max_ticks,
                         char **report_out);

/**
 * Releases a string returned by any entry point.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void clott_string_free(char *s);

#endif /* CLOTT_H */
