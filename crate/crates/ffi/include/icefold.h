#ifndef ICEFOLD_H
#define ICEFOLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IcefoldStatus {
  ICEFOLD_STATUS_OK = 0,
  ICEFOLD_STATUS_NULL_POINTER = 1,
  ICEFOLD_STATUS_INVALID_UTF8 = 2,
  ICEFOLD_STATUS_PARSE = 3,
  ICEFOLD_STATUS_DOMAIN = 4,
  ICEFOLD_STATUS_PANIC = 5,
} IcefoldStatus;

typedef enum IcefoldConvention {
  ICEFOLD_CONVENTION_ROW = 0,
  ICEFOLD_CONVENTION_COLUMN = 1,
} IcefoldConvention;

typedef enum IcefoldMove {
  ICEFOLD_MOVE_ORBIT = 0,
  ICEFOLD_MOVE_VERTEX = 1,
} IcefoldMove;

/**
 * A parsed `.iq` file.
 */
typedef struct IcefoldFile IcefoldFile;

/**
 * An exploration session.
 */
typedef struct IcefoldSession IcefoldSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `.iq` text into a new file handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IcefoldStatus icefold_file_parse(const char *text, struct IcefoldFile **out);

/**
 * # Safety
 * `file` must come from [`icefold_file_parse`] or be null.
 */
void icefold_file_free(struct IcefoldFile *file);

/**
 * Folded exchange matrix as JSON: `rows`, `cols`, `entries`, `symmetrizer`,
 * `column_symmetrizer`.
 *
 * # Safety
 * `file` must be a live handle and `out` a valid pointer.
 */
enum IcefoldStatus icefold_fold_matrix(const struct IcefoldFile *file,
                                       enum IcefoldConvention convention,
                                       char **out);

/**
 * Cluster character of the file's MODULE section as JSON: `character`,
 * `index`, and `projected` when the file has a group.
 *
 * # Safety
 * `file` must be a live handle and `out` a valid pointer.
 */
enum IcefoldStatus icefold_cluster_character(const struct IcefoldFile *file, char **out);

/**
 * Starts a session on a copy of `file`.
 *
 * # Safety
 * `file` must be a live handle and `out` a valid pointer.
 */
enum IcefoldStatus icefold_session_new(const struct IcefoldFile *file, struct IcefoldSession **out);

/**
 * # Safety
 * `session` must come from [`icefold_session_new`] or be null.
 */
void icefold_session_free(struct IcefoldSession *session);

/**
 * Applies one move. On failure the session is unchanged.
 *
 * # Safety
 * `session` must be a live handle.
 */
enum IcefoldStatus icefold_session_mutate(struct IcefoldSession *session,
                                          enum IcefoldMove kind,
                                          uint32_t vertex);

/**
 * Drops the last move; `undone` is set to false when there was none.
 *
 * # Safety
 * `session` must be a live handle; `undone` may be null.
 */
enum IcefoldStatus icefold_session_undo(struct IcefoldSession *session, bool *undone);

/**
 * Current state as JSON: history, both seeds and the commutation flag.
 *
 * # Safety
 * `session` must be a live handle and `out` a valid pointer.
 */
enum IcefoldStatus icefold_session_state(struct IcefoldSession *session, char **out);

/**
 * Message of the last failure on this thread, or null. Release it with
 * [`icefold_string_free`].
 */
char *icefold_last_error(void);

/**
 * # Safety
 * `s` must be a string returned by this library or null.
 */
void icefold_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ICEFOLD_H */
