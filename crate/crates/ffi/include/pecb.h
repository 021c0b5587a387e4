#ifndef PECB_H
#define PECB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bucket epoch-second timestamps into days before renumbering.
 */
#define PECB_LOAD_DAYS 1

/**
 * Renumber the distinct timestamps to 1..=t_max.
 */
#define PECB_LOAD_NORMALIZE 2

/**
 * Result code of every fallible call.
 */
typedef enum PecbStatus {
  PECB_STATUS_OK = 0,
  PECB_STATUS_NULL_ARGUMENT = 1,
  PECB_STATUS_INVALID_ARGUMENT = 2,
  PECB_STATUS_PARSE = 3,
  PECB_STATUS_IO = 4,
  PECB_STATUS_FORMAT = 5,
  PECB_STATUS_INTERNAL = 6,
  PECB_STATUS_PANIC = 7,
} PecbStatus;

/**
 * Vertices of one query answer, sorted ascending.
 */
typedef struct PecbComponent PecbComponent;

/**
 * A temporal graph.
 */
typedef struct PecbGraph PecbGraph;

/**
 * A built or loaded component index.
 */
typedef struct PecbIndex PecbIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * success. Valid until the next call on the same thread.
 */
const char *pecb_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pecb_version(void);

/**
 * Reads a `u v t` edge list. `flags` combines `PECB_LOAD_*` bits.
 */
enum PecbStatus pecb_graph_load(const char *path, uint32_t flags, struct PecbGraph **out);

/**
 * Builds a graph on vertices `0..n` from `m` parallel arrays of endpoints
 * and timestamps. Labels are the decimal ids.
 */
enum PecbStatus pecb_graph_from_edges(uint32_t n,
                                      const uint32_t *us,
                                      const uint32_t *vs,
                                      const uint32_t *ts,
                                      size_t m,
                                      struct PecbGraph **out);

void pecb_graph_free(struct PecbGraph *graph);

uint32_t pecb_graph_vertex_count(const struct PecbGraph *graph);

size_t pecb_graph_edge_count(const struct PecbGraph *graph);

uint32_t pecb_graph_t_max(const struct PecbGraph *graph);

/**
 * Builds the index for cohesion `k`.
 */
enum PecbStatus pecb_index_build(const struct PecbGraph *graph, uint32_t k, struct PecbIndex **out);

enum PecbStatus pecb_index_load(const char *path, struct PecbIndex **out);

enum PecbStatus pecb_index_save(const struct PecbIndex *index, const char *path);

void pecb_index_free(struct PecbIndex *index);

uint32_t pecb_index_vertex_count(const struct PecbIndex *index);

uint32_t pecb_index_t_max(const struct PecbIndex *index);

uint32_t pecb_index_k(const struct PecbIndex *index);

size_t pecb_index_node_count(const struct PecbIndex *index);

/**
 * Dense id of the vertex named `label` in the input file.
 */
enum PecbStatus pecb_index_vertex_id(const struct PecbIndex *index,
                                     const char *label,
                                     uint32_t *out);

/**
 * Label of vertex `u` copied into `buf` with a trailing NUL, truncated to
 * `len` bytes. Returns the untruncated byte length, or 0 on a bad id.
 */
size_t pecb_index_vertex_label(const struct PecbIndex *index, uint32_t u, char *buf, size_t len);

/**
 * The component of vertex `u` in the k-core of window `[ts, te]`; empty
 * when `u` is outside the core.
 */
enum PecbStatus pecb_index_query(const struct PecbIndex *index,
                                 uint32_t u,
                                 uint32_t ts,
                                 uint32_t te,
                                 struct PecbComponent **out);

size_t pecb_component_len(const struct PecbComponent *comp);

/**
 * Pointer to `pecb_component_len` vertex ids, owned by `comp`.
 */
const uint32_t *pecb_component_vertices(const struct PecbComponent *comp);

void pecb_component_free(struct PecbComponent *comp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PECB_H */
