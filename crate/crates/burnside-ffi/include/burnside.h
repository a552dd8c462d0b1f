#ifndef BURNSIDE_H
#define BURNSIDE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum BurnsideStatus {
  BURNSIDE_STATUS_OK = 0,
  BURNSIDE_STATUS_NULL_POINTER = 1,
  BURNSIDE_STATUS_INVALID_UTF8 = 2,
  BURNSIDE_STATUS_INVALID_PARAMS = 3,
  BURNSIDE_STATUS_PARSE_ERROR = 4,
  BURNSIDE_STATUS_INVALID_INPUT = 5,
  BURNSIDE_STATUS_COMPUTATION_FAILED = 6,
  BURNSIDE_STATUS_PANIC = 7,
} BurnsideStatus;

/**
 * Validated constant system.
 */
typedef struct BurnsideParams BurnsideParams;

/**
 * Freely reduced word.
 */
typedef struct BurnsideWord BurnsideWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds parameters. `lab` selects lab mode; `tau` is ignored unless `lab` is nonzero.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum BurnsideStatus burnside_params_new(int64_t n,
                                        uint32_t m,
                                        bool lab,
                                        int64_t tau,
                                        struct BurnsideParams **out);

/**
 * # Safety
 * `params` must come from `burnside_params_new` and not be freed twice. Null is ignored.
 */
void burnside_params_free(struct BurnsideParams *params);

/**
 * Parses and freely reduces a word such as `"a^3 (ab)^-2 B"` over the alphabet of `params`.
 *
 * # Safety
 * Pointers must be valid; `text` must be NUL-terminated.
 */
enum BurnsideStatus burnside_word_parse(const struct BurnsideParams *params,
                                        const char *text,
                                        struct BurnsideWord **out);

/**
 * # Safety
 * `word` must come from this library and not be freed twice. Null is ignored.
 */
void burnside_word_free(struct BurnsideWord *word);

/**
 * Number of letters.
 *
 * # Safety
 * `word` must be a valid handle or null (which gives 0).
 */
size_t burnside_word_len(const struct BurnsideWord *word);

/**
 * Letter equality of two reduced words.
 *
 * # Safety
 * Both handles must be valid or null (null compares unequal).
 */
bool burnside_word_equal(const struct BurnsideWord *a, const struct BurnsideWord *b);

/**
 * Renders a word; `compress` writes repeated blocks as powers. Free the result with `burnside_string_free`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BurnsideStatus burnside_word_to_string(const struct BurnsideWord *word,
                                            bool compress,
                                            char **out);

/**
 * # Safety
 * `s` must come from `burnside_word_to_string`. Null is ignored.
 */
void burnside_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *burnside_last_error(void);

/**
 * Stabilized canonical form; `out_rank` (optional) receives the rank where it settled.
 *
 * # Safety
 * Pointers must be valid; `out_rank` may be null.
 */
enum BurnsideStatus burnside_can(const struct BurnsideParams *params,
                                 const struct BurnsideWord *word,
                                 struct BurnsideWord **out,
                                 uint32_t *out_rank);

/**
 * Canonical form of a fixed rank.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BurnsideStatus burnside_can_r(const struct BurnsideParams *params,
                                   const struct BurnsideWord *word,
                                   uint32_t rank,
                                   struct BurnsideWord **out);

/**
 * Canonical form of rank `rank` of the product `a·b`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BurnsideStatus burnside_mult(const struct BurnsideParams *params,
                                  const struct BurnsideWord *a,
                                  const struct BurnsideWord *b,
                                  uint32_t rank,
                                  struct BurnsideWord **out);

/**
 * Rank of a primitive cyclically reduced period.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BurnsideStatus burnside_classify_rank(const struct BurnsideParams *params,
                                           const struct BurnsideWord *period,
                                           uint32_t *out_rank);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BURNSIDE_H */
