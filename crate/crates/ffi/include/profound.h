#ifndef PROFOUND_H
#define PROFOUND_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ProfoundStatus {
  PROFOUND_STATUS_OK = 0,
  PROFOUND_STATUS_NULL_ARGUMENT = 1,
  PROFOUND_STATUS_INVALID_UTF8 = 2,
  PROFOUND_STATUS_PARSE = 3,
  PROFOUND_STATUS_DIMENSION_MISMATCH = 4,
  PROFOUND_STATUS_NOT_NILPOTENT = 5,
  PROFOUND_STATUS_DEGENERATE_PAIRING = 6,
  PROFOUND_STATUS_INVALID_INPUT = 7,
  PROFOUND_STATUS_NOT_A_POSITIVE_TWIST = 8,
  PROFOUND_STATUS_OUT_OF_RANGE = 9,
  PROFOUND_STATUS_PANIC = 10,
} ProfoundStatus;

/**
 * Direction of a Hurwitz move.
 */
typedef enum ProfoundDirection {
  PROFOUND_DIRECTION_RIGHT = 0,
  PROFOUND_DIRECTION_LEFT = 1,
} ProfoundDirection;

/**
 * An increasing filtration of `Q^n`.
 */
typedef struct ProfoundFiltration ProfoundFiltration;

/**
 * A dense rational matrix.
 */
typedef struct ProfoundMatrix ProfoundMatrix;

/**
 * An ordered word of positive Dehn twists in SL2(Z).
 */
typedef struct ProfoundWord ProfoundWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the previous call on this thread if it failed, or null.
 * Valid until the next call into this library on the same thread.
 */
const char *profound_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *profound_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void profound_string_free(char *s);

/**
 * Matrix from `rows * cols` integers in row-major order.
 *
 * # Safety
 * `entries` must point to `rows * cols` values (it may be null when that is 0);
 * `out` must be writable.
 */
enum ProfoundStatus profound_matrix_new(size_t rows,
                                        size_t cols,
                                        const int64_t *entries,
                                        struct ProfoundMatrix **out);

/**
 * Matrix from JSON rows; entries are integers or rational strings like `"-3/4"`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ProfoundStatus profound_matrix_from_json(const char *json, struct ProfoundMatrix **out);

/**
 * # Safety
 * `m` must be a live matrix handle.
 */
size_t profound_matrix_rows(const struct ProfoundMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle.
 */
size_t profound_matrix_cols(const struct ProfoundMatrix *m);

/**
 * # Safety
 * `m` must be null or a matrix handle not yet freed.
 */
void profound_matrix_free(struct ProfoundMatrix *m);

/**
 * Weight filtration of the nilpotent matrix `n` centered at `center`.
 *
 * # Safety
 * `n` must be a live matrix handle; `out` must be writable.
 */
enum ProfoundStatus profound_mwf_compute(const struct ProfoundMatrix *n,
                                         int64_t center,
                                         struct ProfoundFiltration **out);

/**
 * Whether `f` satisfies the defining properties of the weight filtration of `n`.
 *
 * # Safety
 * `n` and `f` must be live handles; `out` must be writable.
 */
enum ProfoundStatus profound_mwf_check(const struct ProfoundMatrix *n,
                                       int64_t center,
                                       const struct ProfoundFiltration *f,
                                       bool *out);

/**
 * # Safety
 * `f` must be a live filtration handle.
 */
size_t profound_filtration_ambient_dim(const struct ProfoundFiltration *f);

/**
 * `dim F_j`.
 *
 * # Safety
 * `f` must be a live filtration handle.
 */
size_t profound_filtration_step_dim(const struct ProfoundFiltration *f, int64_t j);

/**
 * `dim F_j / F_{j-1}`.
 *
 * # Safety
 * `f` must be a live filtration handle.
 */
size_t profound_filtration_graded_dim(const struct ProfoundFiltration *f, int64_t j);

/**
 * Steps and graded dimensions as JSON.
 *
 * # Safety
 * `f` must be a live filtration handle; `out` must be writable.
 */
enum ProfoundStatus profound_filtration_to_json(const struct ProfoundFiltration *f, char **out);

/**
 * # Safety
 * `f` must be null or a filtration handle not yet freed.
 */
void profound_filtration_free(struct ProfoundFiltration *f);

/**
 * Word from JSON: an array of `[[a,b],[c,d]]` matrices or `{"s":..,"t":..}` letters.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ProfoundStatus profound_word_from_json(const char *json, struct ProfoundWord **out);

/**
 * # Safety
 * `w` must be a live word handle.
 */
size_t profound_word_len(const struct ProfoundWord *w);

/**
 * Total monodromy as `{a, b, c, d}`; `OutOfRange` if an entry exceeds 64 bits.
 *
 * # Safety
 * `w` must be a live word handle; `out` must point to four writable values.
 */
enum ProfoundStatus profound_word_product(const struct ProfoundWord *w, int64_t *out);

/**
 * Hurwitz move on the letters at 0-based positions `i` and `i + 1`.
 *
 * # Safety
 * `w` must be a live word handle; `out` must be writable.
 */
enum ProfoundStatus profound_word_hurwitz(const struct ProfoundWord *w,
                                          size_t i,
                                          enum ProfoundDirection direction,
                                          struct ProfoundWord **out);

/**
 * Extends `w` to a word with identity product and length divisible by 12.
 *
 * # Safety
 * `w` must be a live word handle; `out` must be writable.
 */
enum ProfoundStatus profound_word_complete(const struct ProfoundWord *w, struct ProfoundWord **out);

/**
 * Eleven positive twists whose product is the inverse of the twist `{a, b, c, d}`.
 *
 * # Safety
 * `m` must point to four values; `out` must be writable.
 */
enum ProfoundStatus profound_word_invert_twist(const int64_t *m, struct ProfoundWord **out);

/**
 * # Safety
 * `w` must be a live word handle; `out` must be writable.
 */
enum ProfoundStatus profound_word_to_json(const struct ProfoundWord *w, char **out);

/**
 * # Safety
 * `w` must be null or a word handle not yet freed.
 */
void profound_word_free(struct ProfoundWord *w);

/**
 * Whether the perverse filtration of the elliptic K3 with fiber class `beta`
 * equals the filtration built from `N_{beta,rho}`. Vectors are expressions
 * like `"e2+f2"` over the K3 basis labels.
 *
 * # Safety
 * `beta` and `rho` must be NUL-terminated strings; `out` must be writable.
 */
enum ProfoundStatus profound_k3_pw_check(const char *beta, const char *rho, bool *out);

/**
 * `⟨x, y⟩` on the K3 lattice.
 *
 * # Safety
 * `x` and `y` must be NUL-terminated strings; `out` must be writable.
 */
enum ProfoundStatus profound_k3_pair(const char *x, const char *y, int64_t *out);

/**
 * Weight table of an snc fixture (JSON text, with cohomology) as
 * `[{"degree", "weight", "dim"}]`.
 *
 * # Safety
 * `fixture_json` must be a NUL-terminated string; `out` must be writable.
 */
enum ProfoundStatus profound_snc_weight_table_json(const char *fixture_json, char **out);

/**
 * Runs the command line tool on `argc` arguments (without the program name)
 * and returns its JSON report and exit code.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; the out-pointers must be writable.
 */
enum ProfoundStatus profound_run(int argc,
                                 const char *const *argv,
                                 char **report_json,
                                 int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROFOUND_H */
