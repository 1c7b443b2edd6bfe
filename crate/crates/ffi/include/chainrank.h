#ifndef CHAINRANK_H
#define CHAINRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChainrankStatus {
  CHAINRANK_STATUS_OK = 0,
  CHAINRANK_STATUS_NULL_ARGUMENT = 1,
  CHAINRANK_STATUS_INVALID_UTF8 = 2,
  CHAINRANK_STATUS_PARSE_ERROR = 3,
  CHAINRANK_STATUS_INVALID_INSTANCE = 4,
  CHAINRANK_STATUS_MISSING_BASE_ORDER = 5,
  CHAINRANK_STATUS_INFEASIBLE = 6,
  CHAINRANK_STATUS_INSTANCE_TOO_LARGE = 7,
  CHAINRANK_STATUS_UNSUPPORTED = 8,
  CHAINRANK_STATUS_IO_ERROR = 9,
  CHAINRANK_STATUS_BUFFER_TOO_SMALL = 10,
  CHAINRANK_STATUS_INTERNAL = 11,
} ChainrankStatus;

typedef enum ChainrankVariant {
  CHAINRANK_VARIANT_IMO = 0,
  CHAINRANK_VARIANT_FIXED_BOTH = 1,
  CHAINRANK_VARIANT_FIXED_STUDENTS = 2,
  CHAINRANK_VARIANT_FIXED_QUESTIONS = 3,
  CHAINRANK_VARIANT_CONSTRAINED = 4,
  CHAINRANK_VARIANT_UNCONSTRAINED = 5,
  CHAINRANK_VARIANT_BOTH = 6,
} ChainrankVariant;

typedef enum ChainrankMode {
  CHAINRANK_MODE_EDITING = 0,
  CHAINRANK_MODE_ADDITION = 1,
} ChainrankMode;

/**
 * Opaque validated instance.
 */
typedef struct ChainrankInstance ChainrankInstance;

/**
 * Opaque solution together with the problem it solves.
 */
typedef struct ChainrankSolution ChainrankSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance from the text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_instance_from_text(const char *text, struct ChainrankInstance **out);

/**
 * Reads an instance file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_instance_from_file(const char *path, struct ChainrankInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void chainrank_instance_free(struct ChainrankInstance *inst);

/**
 * Number of students, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t chainrank_instance_num_students(const struct ChainrankInstance *inst);

/**
 * Number of questions, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t chainrank_instance_num_questions(const struct ChainrankInstance *inst);

/**
 * Writes the instance in the text format to `*out`.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_instance_to_text(const struct ChainrankInstance *inst, char **out);

/**
 * Solves with the polynomial solver of `variant`. Unconstrained editing
 * runs the exponential exact solver only when `allow_exponential` is set.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_solve(const struct ChainrankInstance *inst,
                                     enum ChainrankVariant variant,
                                     enum ChainrankMode mode,
                                     size_t k,
                                     bool allow_exponential,
                                     struct ChainrankSolution **out);

/**
 * Solves by exhaustive enumeration of at most `cap` orderings.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_oracle_solve(const struct ChainrankInstance *inst,
                                            enum ChainrankVariant variant,
                                            enum ChainrankMode mode,
                                            size_t k,
                                            uint64_t cap,
                                            struct ChainrankSolution **out);

/**
 * # Safety
 * `sol` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void chainrank_solution_free(struct ChainrankSolution *sol);

/**
 * Number of edits, or `UINT64_MAX` for a null handle.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
uint64_t chainrank_solution_cost(const struct ChainrankSolution *sol);

/**
 * Copies the student order (weakest first) into `buf`. `*needed` receives
 * the required length; pass a null `buf` to query it.
 *
 * # Safety
 * `buf` must be null or hold `len` writable entries; `needed` may be null.
 */
enum ChainrankStatus chainrank_solution_student_order(const struct ChainrankSolution *sol,
                                                      size_t *buf,
                                                      size_t len,
                                                      size_t *needed);

/**
 * Copies the question order (easiest first) into `buf`, as for the
 * student order.
 *
 * # Safety
 * `buf` must be null or hold `len` writable entries; `needed` may be null.
 */
enum ChainrankStatus chainrank_solution_question_order(const struct ChainrankSolution *sol,
                                                       size_t *buf,
                                                       size_t len,
                                                       size_t *needed);

/**
 * Copies the added pairs as flat `student, question` entries; `len` and
 * `*needed` count entries, two per pair.
 *
 * # Safety
 * `buf` must be null or hold `len` writable entries; `needed` may be null.
 */
enum ChainrankStatus chainrank_solution_additions(const struct ChainrankSolution *sol,
                                                  size_t *buf,
                                                  size_t len,
                                                  size_t *needed);

/**
 * Deleted pairs, laid out as for `chainrank_solution_additions`.
 *
 * # Safety
 * `buf` must be null or hold `len` writable entries; `needed` may be null.
 */
enum ChainrankStatus chainrank_solution_deletions(const struct ChainrankSolution *sol,
                                                  size_t *buf,
                                                  size_t len,
                                                  size_t *needed);

/**
 * Runs the independent verifier; `*passed` tells whether every check held.
 *
 * # Safety
 * Both handles must be live and `passed` a valid pointer.
 */
enum ChainrankStatus chainrank_solution_verify(const struct ChainrankInstance *inst,
                                               const struct ChainrankSolution *sol,
                                               bool *passed);

/**
 * Writes the solution in the text format to `*out`.
 *
 * # Safety
 * `sol` must be a live solution handle and `out` a valid pointer.
 */
enum ChainrankStatus chainrank_solution_to_text(const struct ChainrankSolution *sol, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void chainrank_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *chainrank_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *chainrank_status_name(enum ChainrankStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINRANK_H */
