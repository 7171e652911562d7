#ifndef STRICTMIZ_H
#define STRICTMIZ_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum sm_status {
  SM_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SM_STATUS_NULL_ARGUMENT = 1,
  /**
   * An input string was not valid UTF-8.
   */
  SM_STATUS_INVALID_UTF8 = 2,
  /**
   * The article text was rejected; the last error is an error document.
   */
  SM_STATUS_INPUT_ERROR = 3,
  /**
   * The notation table source was rejected.
   */
  SM_STATUS_TABLE_ERROR = 4,
  /**
   * An argument was out of range, such as a width below 20.
   */
  SM_STATUS_INVALID_ARGUMENT = 5,
  /**
   * Internal failure; the library state is still usable.
   */
  SM_STATUS_PANIC = 6,
} sm_status;

typedef enum sm_format {
  SM_FORMAT_TEXT = 0,
  SM_FORMAT_XML = 1,
} sm_format;

/**
 * Opaque notation table.
 */
typedef struct sm_table sm_table;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The bundled default table. Never NULL.
 */
struct sm_table *sm_table_default(void);

/**
 * Loads a table from its source text.
 *
 * # Safety
 * `source` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum sm_status sm_table_load(const char *source, struct sm_table **out);

/**
 * # Safety
 * `table` must be NULL or come from this library and not be freed twice.
 */
void sm_table_free(struct sm_table *table);

/**
 * Parse-tree XML. `source_name` may be NULL.
 *
 * # Safety
 * Pointers must be NULL or valid; `text` and `source_name` NUL-terminated.
 */
enum sm_status sm_parse_xml(const struct sm_table *table,
                            const char *text,
                            const char *source_name,
                            char **out);

/**
 * Pretty-printed text at `width` columns (at least 20).
 *
 * # Safety
 * Pointers must be NULL or valid; `text` NUL-terminated.
 */
enum sm_status sm_pretty(const struct sm_table *table,
                         const char *text,
                         uint32_t width,
                         char **out);

/**
 * Weakly strict form; `format` is an `sm_format` value.
 *
 * # Safety
 * Pointers must be NULL or valid; `text` NUL-terminated.
 */
enum sm_status sm_wsm(const struct sm_table *table, const char *text, uint32_t format, char **out);

/**
 * More strict form; `format` is an `sm_format` value.
 *
 * # Safety
 * Pointers must be NULL or valid; `text` NUL-terminated.
 */
enum sm_status sm_msm(const struct sm_table *table, const char *text, uint32_t format, char **out);

/**
 * 1 if `text` is in weakly strict form, 0 if not, -1 if `text` is NULL or
 * not UTF-8.
 *
 * # Safety
 * `text` must be NULL or NUL-terminated.
 */
int sm_is_wsm(const char *text);

/**
 * Description of the last failure on this thread, or NULL. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *sm_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void sm_string_free(char *s);

/**
 * Library version, static storage.
 */
const char *sm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRICTMIZ_H */
