#ifndef MAXPLUS_CSR_H
#define MAXPLUS_CSR_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MpStatus {
  MP_STATUS_OK = 0,
  MP_STATUS_NULL_POINTER = 1,
  MP_STATUS_INVALID_ARGUMENT = 2,
  MP_STATUS_DIMENSION_MISMATCH = 3,
  MP_STATUS_DIVERGENT = 4,
  MP_STATUS_PRECONDITION_FAILED = 5,
  MP_STATUS_INTERNAL_ERROR = 6,
  MP_STATUS_PANIC = 7,
} MpStatus;

// Opaque generator set with its critical structure.
typedef struct MpEnsemble MpEnsemble;

// Opaque max-plus matrix.
typedef struct MpMatrix MpMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Text of the last error on this thread. Valid until the next failing call on the same thread.
const char *mp_last_error(void);

// Static description of a status code.
const char *mp_status_message(enum MpStatus status);

// Builds a `rows x cols` matrix from `rows * cols` row-major values.
//
// # Safety
// `data` must point to `rows * cols` readable doubles; `out` must be writable.
enum MpStatus mp_matrix_new(size_t rows, size_t cols, const double *data, struct MpMatrix **out);

// # Safety
// `m` must come from this library and not be freed twice. Null is ignored.
void mp_matrix_free(struct MpMatrix *m);

// # Safety
// Pointers must be valid.
enum MpStatus mp_matrix_shape(const struct MpMatrix *m, size_t *rows, size_t *cols);

// Entry `(i, j)`, `-INFINITY` for ε.
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_matrix_get(const struct MpMatrix *m, size_t i, size_t j, double *out);

// # Safety
// Pointers must be valid.
enum MpStatus mp_matrix_multiply(const struct MpMatrix *a,
                                 const struct MpMatrix *b,
                                 struct MpMatrix **out);

// `a^k`, with `a^0` the identity.
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_matrix_power(const struct MpMatrix *a, size_t k, struct MpMatrix **out);

// Kleene star; fails with `DIVERGENT` when some cycle has positive weight.
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_matrix_kleene_star(const struct MpMatrix *a, struct MpMatrix **out);

// Builds an ensemble from `count` square matrices of equal size. The matrices are copied.
//
// # Safety
// `matrices` must point to `count` valid matrix pointers.
enum MpStatus mp_ensemble_new(const struct MpMatrix *const *matrices,
                              size_t count,
                              struct MpEnsemble **out);

// # Safety
// `e` must come from this library and not be freed twice. Null is ignored.
void mp_ensemble_free(struct MpEnsemble *e);

// λ*, `-INFINITY` when no cycle avoids the critical nodes.
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_ensemble_lambda_star(const struct MpEnsemble *e, double *out);

// Product of the visualised generators along `word`.
//
// # Safety
// `word` must point to `len` letters; other pointers must be valid.
enum MpStatus mp_ensemble_gamma_product(const struct MpEnsemble *e,
                                        const size_t *word,
                                        size_t len,
                                        struct MpMatrix **out);

// Whether the product equals its CSR product. On inequality the first differing
// entry is written to `row`/`col`; otherwise both are set to `SIZE_MAX`.
//
// # Safety
// `word` must point to `len` letters; other pointers must be valid.
enum MpStatus mp_ensemble_is_csr(const struct MpEnsemble *e,
                                 const size_t *word,
                                 size_t len,
                                 bool *holds,
                                 size_t *row,
                                 size_t *col);

// Explicit transient bound and the resulting minimal length.
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_ensemble_ambient_bound(const struct MpEnsemble *e, double *bound, size_t *k);

// Number of columns of the compressed CSR factor for `word`.
//
// # Safety
// `word` must point to `len` letters; other pointers must be valid.
enum MpStatus mp_ensemble_rank_bound(const struct MpEnsemble *e,
                                     const size_t *word,
                                     size_t len,
                                     size_t *out);

// Analysis report as a JSON string; release it with [`mp_string_free`].
//
// # Safety
// Pointers must be valid.
enum MpStatus mp_ensemble_analyze_json(const struct MpEnsemble *e, char **out);

// # Safety
// `s` must come from this library. Null is ignored.
void mp_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MAXPLUS_CSR_H */
