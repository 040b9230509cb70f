#ifndef MESB_H
#define MESB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MesbInsertOutcome {
  MESB_INSERT_OUTCOME_PLACED_NEW = 0,
  MESB_INSERT_OUTCOME_REPLACED_INCUMBENT = 1,
  MESB_INSERT_OUTCOME_REJECTED = 2,
} MesbInsertOutcome;

typedef enum MesbStatus {
  MESB_STATUS_OK = 0,
  MESB_STATUS_NULL_ARGUMENT = 1,
  MESB_STATUS_INVALID_UTF8 = 2,
  MESB_STATUS_CONFIG = 3,
  MESB_STATUS_FILE = 4,
  MESB_STATUS_INVALID = 5,
  MESB_STATUS_PANIC = 6,
} MesbStatus;

typedef enum MesbStyle {
  MESB_STYLE_AGGRO = 0,
  MESB_STYLE_CONTROL = 1,
} MesbStyle;

typedef struct MesbArchive MesbArchive;

typedef struct MesbCatalog MesbCatalog;

/**
 * Result of one game. `winner` is 0 or 1, or -1 for a draw. Player 0
 * moved first.
 */
typedef struct MesbGameResult {
  int32_t winner;
  int32_t health_margin;
  int32_t final_health[2];
  uint32_t turns;
} MesbGameResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *mesb_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mesb_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MesbStatus mesb_catalog_builtin(struct MesbCatalog **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MesbStatus mesb_catalog_desk(struct MesbCatalog **out);

/**
 * Parses a catalog from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MesbStatus mesb_catalog_from_json(const char *json, struct MesbCatalog **out);

/**
 * # Safety
 * `catalog` must be null or a handle not yet freed.
 */
void mesb_catalog_free(struct MesbCatalog *catalog);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MesbStatus mesb_catalog_len(const struct MesbCatalog *catalog, size_t *out);

/**
 * `MESB_STATUS_OK` if the deck is legal for the catalog, otherwise
 * `MESB_STATUS_INVALID` with every violation in the error message.
 *
 * # Safety
 * `catalog` must be a valid handle and `deck` a NUL-terminated string.
 */
enum MesbStatus mesb_deck_validate(const struct MesbCatalog *catalog, const char *deck);

/**
 * Mean and population variance of the deck's mana costs.
 *
 * # Safety
 * Pointers must be valid; `deck` NUL-terminated.
 */
enum MesbStatus mesb_deck_behavior(const struct MesbCatalog *catalog,
                                   const char *deck,
                                   double *mean,
                                   double *variance);

/**
 * Plays one game with preset heuristics. `turn_cap` 0 uses the default.
 *
 * # Safety
 * Pointers must be valid; deck strings NUL-terminated.
 */
enum MesbStatus mesb_play_game(const struct MesbCatalog *catalog,
                               const char *first_deck,
                               const char *second_deck,
                               enum MesbStyle first_style,
                               enum MesbStyle second_style,
                               size_t sample_budget,
                               uint32_t turn_cap,
                               uint64_t seed,
                               struct MesbGameResult *out);

/**
 * Number of legal decks of `deck_size` cards, as a decimal string.
 *
 * # Safety
 * Pointers must be valid. Free the string with `mesb_string_free`.
 */
enum MesbStatus mesb_exact_deck_count(const struct MesbCatalog *catalog,
                                      size_t deck_size,
                                      char **out);

/**
 * Empty archive with default parameters and the given evaluation budget.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MesbStatus mesb_archive_new(size_t total_evaluations, struct MesbArchive **out);

/**
 * Offers a deck; its behavior is computed from the catalog.
 *
 * # Safety
 * Pointers must be valid; `deck` NUL-terminated.
 */
enum MesbStatus mesb_archive_insert(struct MesbArchive *archive,
                                    const struct MesbCatalog *catalog,
                                    const char *deck,
                                    double fitness,
                                    double winrate,
                                    uint32_t games,
                                    enum MesbInsertOutcome *outcome);

/**
 * Number of occupied cells.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MesbStatus mesb_archive_len(const struct MesbArchive *archive, size_t *out);

/**
 * Fitness and deck of the best elite. Free `deck` with
 * `mesb_string_free`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MesbStatus mesb_archive_best(const struct MesbArchive *archive, double *fitness, char **deck);

/**
 * # Safety
 * `archive` must be a valid handle and `path` NUL-terminated.
 */
enum MesbStatus mesb_archive_save(const struct MesbArchive *archive, const char *path);

/**
 * # Safety
 * `path` must be NUL-terminated and `out` a valid pointer.
 */
enum MesbStatus mesb_archive_load(const char *path, struct MesbArchive **out);

/**
 * # Safety
 * `archive` must be null or a handle not yet freed.
 */
void mesb_archive_free(struct MesbArchive *archive);

/**
 * Runs a configuration file and writes all run outputs into `out_dir`.
 * `workers` 0 uses every core. `out` may be null; otherwise it receives
 * the final archive.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` null or valid.
 */
enum MesbStatus mesb_run(const char *config_path,
                         const char *out_dir,
                         size_t workers,
                         struct MesbArchive **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MESB_H */
