#ifndef KATFLOW_H
#define KATFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KatflowStatus {
  KATFLOW_STATUS_OK = 0,
  KATFLOW_STATUS_NULL_POINTER = 1,
  KATFLOW_STATUS_INVALID_INPUT = 2,
  KATFLOW_STATUS_NOT_PLANAR = 3,
  KATFLOW_STATUS_SOLVER_FAILURE = 4,
  KATFLOW_STATUS_VERIFICATION_FAILED = 5,
  KATFLOW_STATUS_PANIC = 6,
} KatflowStatus;

/**
 * Opaque labeled graph.
 */
typedef struct KatflowGraph KatflowGraph;

/**
 * Opaque disk packing.
 */
typedef struct KatflowPacking KatflowPacking;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *katflow_last_error(void);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (it may be null when
 * `edge_count` is 0); `out` must be writable.
 */
enum KatflowStatus katflow_graph_new(size_t n,
                                     const size_t *edges,
                                     size_t edge_count,
                                     struct KatflowGraph **out);

/**
 * Parses `{"n": .., "edges": [[i, j], ..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum KatflowStatus katflow_graph_from_json(const char *json, struct KatflowGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library not yet freed.
 */
void katflow_graph_free(struct KatflowGraph *graph);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t katflow_graph_vertex_count(const struct KatflowGraph *graph);

/**
 * Solves for a packing whose contact graph is `graph`. `use_seed` selects whether
 * `seed` randomizes the flip path.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum KatflowStatus katflow_solve(const struct KatflowGraph *graph,
                                 bool use_seed,
                                 uint64_t seed,
                                 struct KatflowPacking **out);

/**
 * Builds a packing from `count` disks stored flat as `x, y, r` triples.
 *
 * # Safety
 * `xyr` must point to `3 * count` readable values; `out` must be writable.
 */
enum KatflowStatus katflow_packing_new(const double *xyr,
                                       size_t count,
                                       struct KatflowPacking **out);

/**
 * # Safety
 * `packing` must be null or a handle from this library not yet freed.
 */
void katflow_packing_free(struct KatflowPacking *packing);

/**
 * Number of disks, or 0 for a null handle.
 *
 * # Safety
 * `packing` must be null or a live handle.
 */
size_t katflow_packing_len(const struct KatflowPacking *packing);

/**
 * Center and radius of disk `index`.
 *
 * # Safety
 * `packing` must be a live handle; the output pointers must be writable.
 */
enum KatflowStatus katflow_packing_disk(const struct KatflowPacking *packing,
                                        size_t index,
                                        double *x,
                                        double *y,
                                        double *r);

/**
 * Serializes the packing as a JSON document; contacts use `contact_tol`. Release the
 * string with `katflow_string_free`.
 *
 * # Safety
 * `packing` must be a live handle; `out` must be writable.
 */
enum KatflowStatus katflow_packing_to_json(const struct KatflowPacking *packing,
                                           double contact_tol,
                                           char **out);

/**
 * Parses a packing JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum KatflowStatus katflow_packing_from_json(const char *json, struct KatflowPacking **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void katflow_string_free(char *s);

/**
 * Checks that the contact graph of `packing` is exactly `graph` at tolerance `tol`.
 * Returns `VERIFICATION_FAILED` and the number of offending pairs otherwise.
 *
 * # Safety
 * Both handles must be live; `violations` may be null.
 */
enum KatflowStatus katflow_verify(const struct KatflowPacking *packing,
                                  const struct KatflowGraph *graph,
                                  double tol,
                                  size_t *violations);

/**
 * Inversive distance between two disks.
 *
 * # Safety
 * `out` must be writable.
 */
enum KatflowStatus katflow_inversive_distance(double x1,
                                              double y1,
                                              double r1,
                                              double x2,
                                              double y2,
                                              double r2,
                                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KATFLOW_H */
