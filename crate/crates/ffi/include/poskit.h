#ifndef POSKIT_H
#define POSKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Family selector for Lie algebra calls.
typedef enum PoskitFamily {
  // sl(n)
  POSKIT_FAMILY_SL = 0,
  // sp(2n)
  POSKIT_FAMILY_SP = 1,
  // so(p,q)
  POSKIT_FAMILY_SO = 2,
} PoskitFamily;

// Status codes. Zero is success.
typedef enum PoskitStatus {
  POSKIT_STATUS_OK = 0,
  POSKIT_STATUS_NULL_POINTER = 1,
  POSKIT_STATUS_SHAPE = 2,
  POSKIT_STATUS_DOMAIN = 3,
  POSKIT_STATUS_PRECONDITION = 4,
  POSKIT_STATUS_SINGULAR = 5,
  POSKIT_STATUS_PARSE = 6,
  POSKIT_STATUS_INVALID_UTF8 = 7,
  POSKIT_STATUS_PANIC = 8,
} PoskitStatus;

// Opaque exact rational matrix.
typedef struct PoskitMatrix PoskitMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Owned by the library.
const char *poskit_last_error(void);

// Library version as a static string.
const char *poskit_version(void);

// # Safety
// `s` must come from this library or be null.
void poskit_string_free(char *s);

// Builds a matrix from row-major integer numerators over a common denominator.
//
// # Safety
// `num` must point to `rows * cols` values; `out` must be writable.
enum PoskitStatus poskit_matrix_from_i64(size_t rows,
                                         size_t cols,
                                         const int64_t *num,
                                         int64_t den,
                                         struct PoskitMatrix **out_m);

// Parses a JSON array of rows; entries are integers or strings like "3/2".
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PoskitStatus poskit_matrix_from_json(const char *json, struct PoskitMatrix **out_m);

// # Safety
// `m` must come from this library or be null.
void poskit_matrix_free(struct PoskitMatrix *m);

// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_matrix_shape(const struct PoskitMatrix *m, size_t *rows, size_t *cols);

// Entry (i, j) as a string like "-3/2". Free with `poskit_string_free`.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_matrix_entry(const struct PoskitMatrix *m,
                                      size_t i,
                                      size_t j,
                                      char **out_s);

// The matrix as JSON rows of strings. Free with `poskit_string_free`.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_matrix_to_json(const struct PoskitMatrix *m, char **out_s);

// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_matrix_mul(const struct PoskitMatrix *a,
                                    const struct PoskitMatrix *b,
                                    struct PoskitMatrix **out_m);

// Exact determinant as a string.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_det(const struct PoskitMatrix *m, char **out_s);

// k-th compound matrix, rows and columns in lexicographic order.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_compound(const struct PoskitMatrix *m,
                                  size_t k,
                                  struct PoskitMatrix **out_m);

// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_is_totally_positive(const struct PoskitMatrix *m, bool *result);

// Positivity in the unipotent upper triangular sense; the input must be upper unitriangular.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_is_u_positive(const struct PoskitMatrix *m, bool *result);

// Distinct positive simple spectrum check at tolerance `tol`.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_spectrum_check(const struct PoskitMatrix *m, double tol, bool *result);

// m = L D U with L lower unitriangular, D positive diagonal, U upper unitriangular.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_whitney(const struct PoskitMatrix *m,
                                 struct PoskitMatrix **lower,
                                 struct PoskitMatrix **diag,
                                 struct PoskitMatrix **upper);

// Product of elementary factors along a reduced word (1-based letters),
// parameter k being num[k]/den[k].
//
// # Safety
// `letters`, `num` and `den` each have `len` entries; `out` must be writable.
enum PoskitStatus poskit_param_word(size_t n,
                                    const size_t *letters,
                                    const int64_t *num,
                                    const int64_t *den,
                                    size_t len,
                                    struct PoskitMatrix **out_m);

// Triple ratio T_{a,b,c} of three flags given by basis matrices (columns span the flag).
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_triple_ratio(const struct PoskitMatrix *first,
                                      const struct PoskitMatrix *second,
                                      const struct PoskitMatrix *third,
                                      size_t a,
                                      size_t b,
                                      size_t c,
                                      char **out_s);

// Positivity of a flag triple: `method` 0 uses triple ratios, 1 uses the unipotent criterion.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_flags_positive(const struct PoskitMatrix *first,
                                        const struct PoskitMatrix *second,
                                        const struct PoskitMatrix *third,
                                        uint32_t method,
                                        bool *result);

// Maslov index of three Lagrangians, each a 2n x n basis matrix.
//
// # Safety
// Handles and out-pointers must be valid.
enum PoskitStatus poskit_maslov_index(const struct PoskitMatrix *l1,
                                      const struct PoskitMatrix *l2,
                                      const struct PoskitMatrix *l3,
                                      int64_t *result);

// Restricted root data as JSON: Dynkin type, rank, and roots with multiplicities.
//
// # Safety
// `out_s` must be writable.
enum PoskitStatus poskit_restricted_roots(enum PoskitFamily family,
                                          size_t n,
                                          size_t p,
                                          size_t q,
                                          char **out_s);

// Whether the algebra admits a positive structure for the 1-based simple-root subset `theta`.
//
// # Safety
// `theta` has `len` entries; `result` must be writable.
enum PoskitStatus poskit_theta_check(enum PoskitFamily family,
                                     size_t n,
                                     size_t p,
                                     size_t q,
                                     const size_t *theta,
                                     size_t len,
                                     bool *result);

// g(Z) = (AZ + B)(CZ + D)^-1 for real symplectic g (2n x 2n, row-major) and Z in the upper half-space.
//
// # Safety
// `g` has 4n^2 entries; `z_re`, `z_im`, `out_re`, `out_im` have n^2.
enum PoskitStatus poskit_siegel_act(size_t n,
                                    const double *g,
                                    const double *z_re,
                                    const double *z_im,
                                    double eps,
                                    double *out_re,
                                    double *out_im);

// Stratum of W in the closed bounded domain: -1 outside, 0 Shilov boundary,
// r in 1..n-1 boundary of that rank, n interior.
//
// # Safety
// `w_re`, `w_im` have n^2 entries; `result` must be writable.
enum PoskitStatus poskit_siegel_classify(size_t n,
                                         const double *w_re,
                                         const double *w_im,
                                         double eps,
                                         int64_t *result);

// Runs the acceptance criteria; `only` may be null, a criterion id, name or group.
// Writes the JSON results and whether every selected criterion passed.
//
// # Safety
// `only` is null or NUL-terminated; out-pointers must be writable.
enum PoskitStatus poskit_accept(uint64_t seed,
                                const char *only,
                                double eps,
                                bool *all_passed,
                                char **out_s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSKIT_H */
