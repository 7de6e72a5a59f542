#ifndef HYPERSIMPLIFY_H
#define HYPERSIMPLIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HS_FORMAT_JSON 0

#define HS_FORMAT_CSV 1

#define HS_SIDE_HYPEREDGE 0

#define HS_SIDE_VERTEX 1

#define HS_WEIGHT_JACCARD 0

#define HS_WEIGHT_OVERLAP 1

#define HS_SINGLETONS_GREYOUT 0

#define HS_SINGLETONS_FILTER 1

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_ARGUMENT = 2,
  HS_STATUS_PARSE_ERROR = 3,
  HS_STATUS_VALIDATION_ERROR = 4,
  HS_STATUS_BAR_NOT_ACTIVE = 5,
  HS_STATUS_UNKNOWN_ID = 6,
  HS_STATUS_BUFFER_TOO_SMALL = 7,
  HS_STATUS_INTERNAL = 8,
} HsStatus;

/**
 * Opaque hypergraph handle.
 */
typedef struct HsHypergraph HsHypergraph;

/**
 * Opaque simplification result handle.
 */
typedef struct HsResult HsResult;

/**
 * Pipeline parameters. Enumerations are plain integers taking the
 * `HS_SIDE_*`, `HS_WEIGHT_*` and `HS_SINGLETONS_*` values.
 */
typedef struct HsParams {
  uint32_t side;
  size_t s;
  uint32_t weight;
  double epsilon;
  bool collapse_vertices;
  bool collapse_edges;
  uint32_t singletons;
} HsParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing why the previous call on this thread failed, or
 * null if it succeeded. Valid until the next call from the same thread.
 */
const char *hs_last_error_message(void);

/**
 * Defaults: hyperedge side, s = 1, Jaccard, epsilon 0, no collapse, grey out.
 */
struct HsParams hs_params_default(void);

/**
 * Parses `len` bytes of JSON (`HS_FORMAT_JSON`) or incidence CSV
 * (`HS_FORMAT_CSV`) into a new hypergraph.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum HsStatus hs_hypergraph_parse(const uint8_t *data,
                                  size_t len,
                                  uint32_t format,
                                  struct HsHypergraph **out);

/**
 * # Safety
 * `h` must be null or a handle from [`hs_hypergraph_parse`] not yet freed.
 */
void hs_hypergraph_free(struct HsHypergraph *h);

/**
 * # Safety
 * `h` must be a live handle; both counts must be writable.
 */
enum HsStatus hs_hypergraph_counts(const struct HsHypergraph *h,
                                   size_t *vertices,
                                   size_t *hyperedges);

/**
 * Runs the pipeline on `h`.
 *
 * # Safety
 * `h` and `params` must be valid; `out` must be writable.
 */
enum HsStatus hs_simplify(const struct HsHypergraph *h,
                          const struct HsParams *params,
                          struct HsResult **out);

/**
 * # Safety
 * `r` must be null or a live result handle.
 */
void hs_result_free(struct HsResult *r);

/**
 * Bar lengths in bar-id order; essential bars read as `INFINITY`.
 *
 * # Safety
 * `r` must be live; `buf` must hold `capacity` doubles or be null.
 */
enum HsStatus hs_result_bar_lengths(const struct HsResult *r,
                                    double *buf,
                                    size_t capacity,
                                    size_t *needed);

/**
 * Number of simplified elements.
 *
 * # Safety
 * `r` must be live; `count` writable.
 */
enum HsStatus hs_result_class_count(const struct HsResult *r, size_t *count);

/**
 * Original ids merged into simplified element `class_id`.
 *
 * # Safety
 * `r` must be live; `buf` must hold `capacity` values or be null.
 */
enum HsStatus hs_result_class_members(const struct HsResult *r,
                                      size_t class_id,
                                      size_t *buf,
                                      size_t capacity,
                                      size_t *needed);

/**
 * New result re-cut at `epsilon`, keeping expanded bars.
 *
 * # Safety
 * `r` must be live; `out` writable.
 */
enum HsStatus hs_result_with_epsilon(const struct HsResult *r,
                                     double epsilon,
                                     struct HsResult **out);

/**
 * New result with the merge behind `bar_id` undone.
 *
 * # Safety
 * `r` must be live; `out` writable.
 */
enum HsStatus hs_result_expand_bar(const struct HsResult *r, size_t bar_id, struct HsResult **out);

/**
 * The result document as a NUL-terminated JSON string; release it with
 * [`hs_string_free`].
 *
 * # Safety
 * `r` must be live; `out` writable.
 */
enum HsStatus hs_result_to_json(const struct HsResult *r, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERSIMPLIFY_H */
