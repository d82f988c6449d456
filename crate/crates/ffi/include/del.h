#ifndef DEL_H
#define DEL_H

/* Generated by cbindgen from del-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum DelStatus {
  DEL_STATUS_OK = 0,
  DEL_STATUS_INVALID_ARGUMENT = 1,
  DEL_STATUS_CONFIG_ERROR = 2,
  DEL_STATUS_DATA_ERROR = 3,
  DEL_STATUS_NUMERIC_ERROR = 4,
} DelStatus;

// Opaque dataset handle: a named, ordered collection of graphs.
typedef struct DelDataset DelDataset;

// Opaque feature-set handle: one m x k edge-length matrix per graph.
typedef struct DelFeatureSet DelFeatureSet;

// Sampling parameters; start from [`del_sample_params_default`] and
// overwrite what you need.
typedef struct DelSampleParams {
  // 0 = Fruchterman-Reingold, 1 = Kamada-Kawai, 2 = (a, r) model.
  uint32_t algorithm;
  // Layout dimension, >= 2.
  uint32_t dim;
  // Iteration budget per layout.
  uint32_t iterations;
  // Layouts sampled per graph.
  uint32_t layouts_per_graph;
  // Worker threads; 0 picks the core count.
  uint32_t threads;
  uint64_t base_seed;
  double k_attr;
  double k_rep;
  double a_exp;
  double r_exp;
  double step_size;
  double cooling;
  double noise_scale;
  double kk_spring_k;
  double kk_tolerance;
  double init_box;
} DelSampleParams;

// Outcome of the built-in GTW expressivity analysis.
typedef struct DelExpressivityResult {
  // KS p-value between the two graphs' GTW distributions.
  double ks_between_p;
  // Smaller of the two run-to-run KS p-values.
  double ks_self_p_min;
  // 1 if the pair passes 1-WL color refinement as indistinguishable.
  uint8_t wl_indistinguishable;
  // 1 if `ks_between_p` clears the distinguishability threshold.
  uint8_t distinguishable;
  // 1 if both run-to-run p-values clear the stability threshold.
  uint8_t stable;
} DelExpressivityResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *del_last_error_message(void);

// Library version as a static string.
const char *del_version(void);

// Fill `params` with the default configuration (FR, 2D, 50 iterations,
// 8 layouts, seed 42).
//
// # Safety
// `params` must point to writable memory for one `DelSampleParams`.
enum DelStatus del_sample_params_default(struct DelSampleParams *params);

// Load a TUDataset-style directory.
//
// # Safety
// `dir` must be a NUL-terminated path; `out` must point to writable memory
// for one pointer. On success `*out` owns the dataset and must be released
// with [`del_dataset_free`].
enum DelStatus del_dataset_load_tudataset(const char *dir, struct DelDataset **out);

// Parse one graph from an in-memory edge-list document (UTF-8, `#`
// comments, optional `n=<int>` header) into a single-graph dataset.
//
// # Safety
// `text` and `graph_id` must be NUL-terminated strings; `out` as in
// [`del_dataset_load_tudataset`].
enum DelStatus del_dataset_parse_edge_list(const char *text,
                                           const char *graph_id,
                                           struct DelDataset **out);

// Number of graphs in the dataset; 0 if `ds` is null.
//
// # Safety
// `ds` must be null or a live dataset handle.
size_t del_dataset_graph_count(const struct DelDataset *ds);

// Release a dataset handle. Null is a no-op.
//
// # Safety
// `ds` must be null or a pointer obtained from a `del_dataset_*` loader,
// not yet freed.
void del_dataset_free(struct DelDataset *ds);

// Sample layout ensembles for every graph and assemble the edge-length
// feature matrices. Deterministic for a fixed (dataset, params) pair
// regardless of `threads`.
//
// # Safety
// `ds` must be a live dataset handle, `params` readable, `out` writable.
// On success `*out` must be released with [`del_features_free`].
enum DelStatus del_compute_features(const struct DelDataset *ds,
                                    const struct DelSampleParams *params,
                                    struct DelFeatureSet **out);

// Number of graphs in the feature set; 0 if `fs` is null.
//
// # Safety
// `fs` must be null or a live feature-set handle.
size_t del_features_count(const struct DelFeatureSet *fs);

// Graph id of entry `index`, or null if out of range. The pointer stays
// valid while the feature set is alive.
//
// # Safety
// `fs` must be null or a live feature-set handle.
const char *del_features_graph_id(const struct DelFeatureSet *fs, size_t index);

// Shape of entry `index`: edge count (rows) and layout count (columns).
//
// # Safety
// `fs` must be a live feature-set handle; `edges` and `layouts` must be
// writable or null.
enum DelStatus del_features_shape(const struct DelFeatureSet *fs,
                                  size_t index,
                                  size_t *edges,
                                  size_t *layouts);

// Endpoints of edge `edge` (canonical order, `u < v`) of entry `index`.
//
// # Safety
// `fs` must be a live feature-set handle; `u` and `v` must be writable.
enum DelStatus del_features_edge_endpoints(const struct DelFeatureSet *fs,
                                           size_t index,
                                           size_t edge,
                                           uint32_t *u,
                                           uint32_t *v);

// Borrow the edge-length buffer of entry `index`: column-major, layout j's
// lengths occupy `[j*edges, (j+1)*edges)`. Valid while the feature set is
// alive.
//
// # Safety
// `fs` must be a live feature-set handle; `data` and `len` must be
// writable.
enum DelStatus del_features_lengths(const struct DelFeatureSet *fs,
                                    size_t index,
                                    const double **data,
                                    size_t *len);

// Write the feature set to the binary `.delf` format.
//
// # Safety
// `fs` must be a live feature-set handle; `path` a NUL-terminated path.
enum DelStatus del_features_write(const struct DelFeatureSet *fs, const char *path);

// Read a `.delf` file into a new feature set.
//
// # Safety
// `path` must be a NUL-terminated path; `out` writable. On success `*out`
// must be released with [`del_features_free`].
enum DelStatus del_features_read(const char *path, struct DelFeatureSet **out);

// Release a feature-set handle. Null is a no-op.
//
// # Safety
// `fs` must be null or a pointer from [`del_compute_features`] /
// [`del_features_read`], not yet freed.
void del_features_free(struct DelFeatureSet *fs);

// Run the Decalin/Bicyclopentyl expressivity analysis with `n_samples`
// GTW samples per graph.
//
// # Safety
// `params` must be readable and `result` writable.
enum DelStatus del_builtin_expressivity(const struct DelSampleParams *params,
                                        size_t n_samples,
                                        struct DelExpressivityResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEL_H */
