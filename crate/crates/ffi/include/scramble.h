#ifndef SCRAMBLE_H
#define SCRAMBLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScrambleStatus {
  ScrambleStatus_Ok = 0,
  ScrambleStatus_NullPointer = 1,
  ScrambleStatus_InvalidArgument = 2,
  ScrambleStatus_GraphError = 3,
  ScrambleStatus_SimulationError = 4,
  ScrambleStatus_EstimateError = 5,
  ScrambleStatus_BufferTooSmall = 6,
  ScrambleStatus_Panic = 7,
} ScrambleStatus;

// Gate schedules accepted by [`scramble_occupancy_curve`].
typedef enum ScrambleSchedule {
  ScrambleSchedule_PoissonRateOne = 0,
  ScrambleSchedule_UniformRandomEdge = 1,
  ScrambleSchedule_RoundRobin = 2,
  ScrambleSchedule_RandomPermutationSweeps = 3,
} ScrambleSchedule;

// Opaque graph handle.
typedef struct ScrambleGraph ScrambleGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or an empty string.
// The pointer stays valid until the next library call on the same thread.
const char *scramble_last_error(void);

// Library version as a static NUL-terminated string.
const char *scramble_version(void);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum ScrambleStatus scramble_graph_binary_tree(uint32_t depth, struct ScrambleGraph **out);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum ScrambleStatus scramble_graph_zary_tree(size_t z, uint32_t depth, struct ScrambleGraph **out);

// # Safety
// `dims` must point to `num_dims` side lengths; `out` must be valid.
enum ScrambleStatus scramble_graph_lattice(const size_t *dims,
                                           size_t num_dims,
                                           struct ScrambleGraph **out);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum ScrambleStatus scramble_graph_dumbbell(size_t m, struct ScrambleGraph **out);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum ScrambleStatus scramble_graph_complete(size_t n, struct ScrambleGraph **out);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum ScrambleStatus scramble_graph_star(size_t n, struct ScrambleGraph **out);

// Parses the edge-list text format. Disconnected graphs are rejected.
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid.
enum ScrambleStatus scramble_graph_from_edge_list(const char *text, struct ScrambleGraph **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `g` must come from a builder in this library and not be used afterwards.
void scramble_graph_free(struct ScrambleGraph *g);

// # Safety
// `g` must be a live handle; `out` must be valid.
enum ScrambleStatus scramble_graph_num_vertices(const struct ScrambleGraph *g, size_t *out);

// # Safety
// `g` must be a live handle; `out` must be valid.
enum ScrambleStatus scramble_graph_num_edges(const struct ScrambleGraph *g, size_t *out);

// # Safety
// `g` must be a live handle; `out` must be valid.
enum ScrambleStatus scramble_graph_diameter(const struct ScrambleGraph *g, size_t *out);

// # Safety
// `g` must be a live handle; `out` must be valid.
enum ScrambleStatus scramble_graph_distance(const struct ScrambleGraph *g,
                                            size_t x,
                                            size_t y,
                                            size_t *out);

// # Safety
// `g` must be a live handle; `x_out` and `y_out` must be valid.
enum ScrambleStatus scramble_graph_farthest_pair(const struct ScrambleGraph *g,
                                                 size_t *x_out,
                                                 size_t *y_out);

// Writes the edge list into `buf` (NUL-terminated). `needed` receives the
// required size including the terminator; if `capacity` is smaller the
// status is `BufferTooSmall` and `buf` is untouched.
//
// # Safety
// `g` must be live; `buf` must hold `capacity` bytes; `needed` must be valid.
enum ScrambleStatus scramble_graph_to_edge_list(const struct ScrambleGraph *g,
                                                char *buf,
                                                size_t capacity,
                                                size_t *needed);

// Number of edges between `side_a` and its complement.
//
// # Safety
// `g` must be live; `side_a` must hold `len` vertex ids; `out` must be valid.
enum ScrambleStatus scramble_cut_size(const struct ScrambleGraph *g,
                                      const size_t *side_a,
                                      size_t len,
                                      size_t *out);

// # Safety
// `out` must be valid.
enum ScrambleStatus scramble_equilibrium_occupancy(uint32_t local_dim,
                                                   size_t num_vertices,
                                                   double *out);

// # Safety
// `out` must be valid.
enum ScrambleStatus scramble_otoc_from_occupancy(double p, uint32_t local_dim, double *out);

// # Safety
// `g` must be live; `side_a` must hold `len` vertex ids; `out` must be valid.
enum ScrambleStatus scramble_tau_ent_lower_bound(const struct ScrambleGraph *g,
                                                 const size_t *side_a,
                                                 size_t len,
                                                 uint32_t local_dim,
                                                 double fraction,
                                                 double *out);

// # Safety
// `value_out` and `capped_out` must be valid.
enum ScrambleStatus scramble_decoding_fidelity_bound(double otoc_value,
                                                     uint32_t d_a,
                                                     double *value_out,
                                                     bool *capped_out);

// Monte Carlo `P(label(target) = N)` at each of `num_times` sorted sample
// times, written to `estimates` and `std_errors` (each `num_times` long).
// `schedule` is a [`ScrambleSchedule`] value. Results depend only on
// `seed`, not on thread count.
//
// # Safety
// `g` must be live; `times`, `estimates` and `std_errors` must each hold
// `num_times` doubles.
enum ScrambleStatus scramble_occupancy_curve(const struct ScrambleGraph *g,
                                             uint32_t local_dim,
                                             size_t start,
                                             size_t target,
                                             uint32_t schedule,
                                             double horizon,
                                             const double *times,
                                             size_t num_times,
                                             uint64_t num_traj,
                                             uint64_t seed,
                                             double *estimates,
                                             double *std_errors);

// Conservative crossing time of a sampled curve (see the estimators
// module). `censored_out` is set when the curve never crosses, in which
// case `tau_out` is the last sample time.
//
// # Safety
// The three input arrays must hold `len` doubles; outputs must be valid.
enum ScrambleStatus scramble_tau_from_curve(const double *times,
                                            const double *estimates,
                                            const double *std_errors,
                                            size_t len,
                                            double threshold,
                                            double *tau_out,
                                            bool *censored_out);

// Null-safe helper so callers can reset their handle slot.
//
// # Safety
// `slot` must be null or a valid handle slot.
void scramble_graph_release(struct ScrambleGraph **slot);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCRAMBLE_H */
