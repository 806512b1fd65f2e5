#ifndef PATHGRID_H
#define PATHGRID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  PG_STATUS_INVALID_PARAMETER = 2,
  PG_STATUS_SIZE_CAP = 3,
  PG_STATUS_NUMERIC = 4,
  PG_STATUS_BUDGET_EXHAUSTED = 5,
  PG_STATUS_IO = 6,
  PG_STATUS_BUFFER_TOO_SMALL = 7,
  PG_STATUS_PANIC = 8,
} PgStatus;

typedef enum PgConstruction {
  PG_CONSTRUCTION_VK = 0,
  PG_CONSTRUCTION_VK_COMPLEMENT = 1,
  PG_CONSTRUCTION_XK = 2,
  PG_CONSTRUCTION_XK_COMPLEMENT = 3,
} PgConstruction;

typedef enum PgParity {
  PG_PARITY_ODD3 = 0,
  PG_PARITY_EVEN = 1,
} PgParity;

typedef enum PgValueKind {
  PG_VALUE_KIND_EXACT = 0,
  PG_VALUE_KIND_LOWER = 1,
  PG_VALUE_KIND_UPPER_UNPROVEN = 2,
} PgValueKind;

typedef struct PgGraph PgGraph;

typedef struct PgMatrix PgMatrix;

typedef struct PgVertexSet PgVertexSet;

// Outcome of [`pg_f_brute`]. `has_value` is 0 when the budget ran out
// before any subset was scored.
typedef struct PgFResult {
  uint8_t has_value;
  uint64_t value;
  enum PgValueKind kind;
  uint64_t alpha;
  uint64_t subsets_examined;
} PgFResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// successful one. Valid until the next call into this library.
const char *pg_last_error_message(void);

// NUL-terminated library version; static storage.
const char *pg_version(void);

// # Safety
// `out` must be valid for writes.
enum PgStatus pg_graph_new(uint32_t m, uint32_t k, uint64_t size_cap, struct PgGraph **out);

// # Safety
// `g` must be null or a handle from [`pg_graph_new`] not yet freed.
void pg_graph_free(struct PgGraph *g);

// # Safety
// `g` must be a live graph handle and `out` valid for writes.
enum PgStatus pg_graph_n_vertices(const struct PgGraph *g, uint64_t *out);

// # Safety
// `g` must be a live graph handle and `out` valid for writes.
enum PgStatus pg_graph_n_edges(const struct PgGraph *g, uint64_t *out);

// Builds one of the named vertex-set constructions.
//
// # Safety
// `out` must be valid for writes.
enum PgStatus pg_construct(enum PgConstruction kind,
                           uint32_t m,
                           uint32_t k,
                           uint64_t size_cap,
                           struct PgVertexSet **out);

// Vertex set from `len` ranks of the graph `g`.
//
// # Safety
// `g` must be a live graph handle, `ranks` valid for `len` reads (or null
// with `len == 0`) and `out` valid for writes.
enum PgStatus pg_set_from_ranks(const struct PgGraph *g,
                                const uint64_t *ranks,
                                uintptr_t len,
                                struct PgVertexSet **out);

// # Safety
// `s` must be null or a handle from this library not yet freed.
void pg_set_free(struct PgVertexSet *s);

// # Safety
// `s` must be a live set handle and `out` valid for writes.
enum PgStatus pg_set_len(const struct PgVertexSet *s, uint64_t *out);

// Copies the ranks in ascending order into `buf`. `*written` receives the
// set size; if `cap` is smaller nothing is copied and the status is
// `BufferTooSmall`.
//
// # Safety
// `s` must be a live set handle, `buf` valid for `cap` writes and
// `written` valid for writes.
enum PgStatus pg_set_ranks(const struct PgVertexSet *s,
                           uint64_t *buf,
                           uintptr_t cap,
                           uintptr_t *written);

// Maximum degree of the induced subgraph.
//
// # Safety
// `s` must be a live set handle and `out` valid for writes.
enum PgStatus pg_set_max_degree(const struct PgVertexSet *s, uint64_t *out);

// # Safety
// `out` must be valid for writes.
enum PgStatus pg_matrix_build(enum PgParity parity_,
                              uint32_t n,
                              uint32_t k,
                              uint64_t size_cap,
                              struct PgMatrix **out);

// # Safety
// `a` must be null or a handle from [`pg_matrix_build`] not yet freed.
void pg_matrix_free(struct PgMatrix *a);

// # Safety
// `a` must be a live matrix handle; `dim` and `nnz` valid for writes.
enum PgStatus pg_matrix_shape(const struct PgMatrix *a, uint64_t *dim, uint64_t *nnz);

// Entry `(i, j)`, 0-based, in `{-1, 0, 1}`.
//
// # Safety
// `a` must be a live matrix handle and `out` valid for writes.
enum PgStatus pg_matrix_entry(const struct PgMatrix *a, uint64_t i, uint64_t j, int8_t *out);

// Writes MatrixMarket text to `path`.
//
// # Safety
// `a` must be a live matrix handle and `path` a NUL-terminated UTF-8 string.
enum PgStatus pg_matrix_write_mtx(const struct PgMatrix *a, const char *path);

// Closed-form independence number `ceil(m^k / 2)`.
//
// # Safety
// `out` must be valid for writes.
enum PgStatus pg_alpha(uint32_t m, uint32_t k, uint64_t *out);

// # Safety
// `out` must be valid for writes.
enum PgStatus pg_beta(uint32_t n, double tol, double *out);

// # Safety
// `out` must be valid for writes.
enum PgStatus pg_lower_bound_even(uint32_t n, uint32_t k, uint64_t *out);

// Closed-form value (odd `m`) or lower bound (even `m`).
//
// # Safety
// `value` and `kind` must be valid for writes.
enum PgStatus pg_f_theorem(uint32_t m, uint32_t k, uint64_t *value, enum PgValueKind *kind);

// Exhaustive search for the minimum induced maximum degree over subsets of
// size `alpha + s`. Zero for `max_subsets`, `max_seconds` or `workers`
// selects the default.
//
// # Safety
// `g` must be a live graph handle and `out` valid for writes.
enum PgStatus pg_f_brute(const struct PgGraph *g,
                         uint64_t s,
                         uint64_t max_subsets,
                         double max_seconds,
                         uint32_t workers,
                         struct PgFResult *out);

// Smallest positive eigenvalue of the even signed matrix `A_k` on
// `P_(2n)^k`, from a dense solve.
//
// # Safety
// `out` must be valid for writes.
enum PgStatus pg_min_positive_eig_even(uint32_t n, uint32_t k, double *out);

// Runs every verification check; `*passed` is 1 when all pass.
//
// # Safety
// `passed` must be valid for writes.
enum PgStatus pg_verify_all(uint64_t max_size, double tol, uint64_t seed, uint8_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHGRID_H */
