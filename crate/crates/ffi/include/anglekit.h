#ifndef ANGLEKIT_H
#define ANGLEKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define AK_MODE_ONE_SIDED 0

#define AK_MODE_TWO_SIDED 1

#define AK_MODE_CYCLIC 2

typedef enum AkStatus {
  AK_STATUS_OK = 0,
  AK_STATUS_NULL_POINTER = 1,
  AK_STATUS_INVALID_ARGUMENT = 2,
  AK_STATUS_DOMAIN = 3,
  AK_STATUS_NON_CONVERGENCE = 4,
  AK_STATUS_NUMERICAL = 5,
  AK_STATUS_BUFFER_TOO_SMALL = 6,
  AK_STATUS_PANIC = 7,
} AkStatus;

// Opaque square operator on a labelled basis.
typedef struct AkOperator AkOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failed call on this thread, or an empty
// string after a successful call. The pointer stays valid until the next
// call into this library on the same thread.
const char *ak_last_error(void);

// Full half-circle angle operator for the shift on a centred basis of
// dimension `dim`. The result acts on the doubled space of size `2 * dim`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkStatus ak_halfcircle_angle(int32_t mode, uintptr_t dim, struct AkOperator **out);

// Quantized angle on the one-sided basis of dimension `dim`, for the
// thermal weight with parameter `t` in `[0, 1)`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkStatus ak_wh_angle(double t, uintptr_t dim, struct AkOperator **out);

// Angle operator of the Gaussian circle coherent states with width
// `sigma` on a centred two-sided basis of dimension `dim`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkStatus ak_circle_angle(double sigma, uintptr_t dim, struct AkOperator **out);

// Canonical angle `π I + i Σ_{1≤|n|≤Q} Uⁿ/n` on a centred cyclic or
// two-sided basis.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkStatus ak_canonical_angle(int32_t mode,
                                 uintptr_t dim,
                                 uintptr_t q_cutoff,
                                 struct AkOperator **out);

// Releases a handle. Passing NULL is a no-op.
//
// # Safety
// `op` must be NULL or a handle returned by this library that has not
// been freed.
void ak_operator_free(struct AkOperator *op);

// Writes the matrix dimension of `op` to `dim_out`.
//
// # Safety
// `op` must be a live handle and `dim_out` a valid writable pointer.
enum AkStatus ak_operator_dim(const struct AkOperator *op, uintptr_t *dim_out);

// Writes the label attached to matrix row `row`.
//
// # Safety
// `op` must be a live handle and `label_out` a valid writable pointer.
enum AkStatus ak_operator_label(const struct AkOperator *op, uintptr_t row, int64_t *label_out);

// Writes the real and imaginary parts of entry `(row, col)`.
//
// # Safety
// `op` must be a live handle; `re` and `im` must be valid writable pointers.
enum AkStatus ak_operator_entry(const struct AkOperator *op,
                                uintptr_t row,
                                uintptr_t col,
                                double *re,
                                double *im);

// Ascending eigenvalues of the Hermitian operator `op`. `written` receives
// the number of eigenvalues; when `capacity` is too small nothing is copied,
// `written` holds the required length and `AK_STATUS_BUFFER_TOO_SMALL` is
// returned. `values` may be NULL when `capacity` is 0.
//
// # Safety
// `op` must be a live handle, `values` must point to `capacity` writable
// doubles, and `written` must be a valid writable pointer.
enum AkStatus ak_operator_eigenvalues(const struct AkOperator *op,
                                      double *values,
                                      uintptr_t capacity,
                                      uintptr_t *written);

// Lower symbol of `op` at `z = sqrt(j) e^{i gamma}` for the thermal weight
// with parameter `t`. `op` must live on a one-sided basis. `leakage`
// receives the probability mass lost to truncation and may be NULL.
//
// # Safety
// `op` must be a live handle; `re` and `im` must be valid writable
// pointers; `leakage` must be NULL or writable.
enum AkStatus ak_lower_symbol(const struct AkOperator *op,
                              double t,
                              double j,
                              double gamma,
                              double *re,
                              double *im,
                              double *leakage);

// Matrix coefficient `F_{n n'}(t)` of the quantized angle.
//
// # Safety
// `out` must be a valid writable pointer.
enum AkStatus ak_f_coefficient(uint64_t n, uint64_t np, double t, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ANGLEKIT_H */
