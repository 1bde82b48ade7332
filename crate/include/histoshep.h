/* C interface to histoshep: smooth reconstruction of piecewise functions from segment integrals. */

#pragma once

/* Generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every ABI call.
typedef enum HsStatus {
  // Success.
  HS_STATUS_OK = 0,
  // A required pointer argument was null.
  HS_STATUS_NULL_POINTER = 1,
  // Malformed input: non-finite or unsorted nodes, wrong lengths,
  // jumps outside the domain or on nodes, `mu <= 0`, `K < 2`.
  HS_STATUS_INVALID_INPUT = 2,
  // The grid cannot support the requested configuration: inadmissible
  // mesh, degree above the feasible maximum, or an unsatisfiable shared
  // node pool.
  HS_STATUS_INFEASIBLE = 3,
  // Numerical failure: singular Gram system, residual out of bounds, or
  // an internal invariant violation.
  HS_STATUS_NUMERICAL = 4,
  // An evaluation abscissa lies outside the operator's domain.
  HS_STATUS_OUT_OF_DOMAIN = 5,
} HsStatus;

// Shepard node placement selector for [`hs_operator_build`].
typedef enum HsPlacement {
  // Choose from the covering geometry (shared pool when windows overlap
  // by more than a length tolerance, interior-equispaced otherwise).
  HS_PLACEMENT_AUTO = 0,
  // K equispaced nodes in the open interior of every covering interval.
  HS_PLACEMENT_INTERIOR = 1,
  // Nodes drawn from a per-group pool so overlaps share identical nodes.
  HS_PLACEMENT_SHARED = 2,
} HsPlacement;

// Opaque handle to a built quasi-histopolant.
typedef struct HsOperator HsOperator;

// Build summary snapshot, filled by [`hs_operator_info`].
typedef struct HsInfo {
  // Requested minimum local polynomial degree.
  size_t d;
  // Shepard nodes per covering interval.
  size_t k;
  // Inverse-distance weight exponent.
  double mu;
  // Common covering interval length.
  double radius;
  // Flattened covering count (number of local fits and node sets).
  size_t m;
  size_t n_segments;
  size_t n_jumps;
  // Worst |∫p − datum| over all local fits.
  double max_residual;
  // Worst condition estimate among the local Gram systems.
  double max_gram_cond;
  double domain_min;
  double domain_max;
  // Placement actually used (never [`HsPlacement::Auto`]).
  enum HsPlacement placement;
} HsInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a quasi-histopolant from integral data.
//
// `nodes` (length `n_nodes`) are the strictly increasing segment endpoints;
// `integrals` (length `n_integrals = n_nodes - 1`) the data over each
// segment; `jumps` (length `n_jumps`, may be null when `n_jumps` is 0) the
// declared discontinuity abscissae. On success `*out` owns the operator and
// must be released with [`hs_operator_free`].
//
// # Safety
//
// `nodes`, `integrals`, and (when `n_jumps > 0`) `jumps` must point to
// readable arrays of the stated lengths; `out` must be a valid, writable
// pointer. The call does not retain the input arrays.
enum HsStatus hs_operator_build(const double *nodes,
                                size_t n_nodes,
                                const double *integrals,
                                size_t n_integrals,
                                const double *jumps,
                                size_t n_jumps,
                                size_t d,
                                size_t k,
                                double mu,
                                enum HsPlacement placement,
                                struct HsOperator **out);

// Evaluates the operator at a single abscissa.
//
// # Safety
//
// `op` must be a live handle from [`hs_operator_build`]; `out` must be a
// valid, writable pointer.
enum HsStatus hs_operator_evaluate(const struct HsOperator *op, double x, double *out);

// Evaluates the operator at `n` abscissae, writing `n` results to `out`.
// On any failure the output buffer contents are unspecified.
//
// # Safety
//
// `op` must be a live handle; `xs` must point to `n` readable values and
// `out` to `n` writable slots (`n = 0` is allowed, in which case both may
// be null).
enum HsStatus hs_operator_evaluate_many(const struct HsOperator *op,
                                        const double *xs,
                                        size_t n,
                                        double *out);

// Fills `*out` with the build summary of a live operator.
//
// # Safety
//
// `op` must be a live handle; `out` must be a valid, writable pointer.
enum HsStatus hs_operator_info(const struct HsOperator *op, struct HsInfo *out);

// Releases an operator. Passing null is a no-op; a handle must not be used
// after it has been freed.
//
// # Safety
//
// `op` must be null or a handle obtained from [`hs_operator_build`] that has
// not been freed yet.
void hs_operator_free(struct HsOperator *op);

// Copies the calling thread's last error message into `buf` as a
// NUL-terminated string, truncating to `cap - 1` bytes if needed. Returns
// the full message length in bytes (excluding the NUL); call with a null
// `buf` or `cap == 0` to query the required size. The message is updated by
// every failing call on the same thread.
//
// # Safety
//
// When `buf` is non-null it must point to `cap` writable bytes.
size_t hs_last_error(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
