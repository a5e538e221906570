/*
 * qteich C ABI.
 *
 * Conventions:
 *   - handles are opaque pointers, released with the matching *_free;
 *   - fallible calls return a QteichStatus (0 = ok) and leave a message
 *     retrievable with qteich_last_error on the calling thread;
 *   - complex numbers are interleaved double pairs [re, im];
 *   - matrices are row-major;
 *   - edges and faces are indexed from 0 (JSON artifacts index from 1).
 */

#ifndef QTEICH_H
#define QTEICH_H

/* Generated by cbindgen from the qteich-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function of this ABI.
//
// Values 1..=18 mirror the error kinds of the underlying library; values
// from 100 up are produced by the binding layer itself.
enum QteichStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // Success.
  QteichStatus_Ok = 0,
  // Malformed combinatorial data (bad face table, edge used three times, ...).
  QteichStatus_Surface = 1,
  // The requested edge cannot be flipped (boundary or self-folded).
  QteichStatus_NotFlippable = 2,
  // Invalid root-of-unity parameters (N < 2, even c, or gcd(c, N) > 1).
  QteichStatus_Params = 3,
  // Weight-system failure: wrong arity or a zero weight.
  QteichStatus_Weights = 4,
  // A flip was requested at a weight too close to the singular value -1.
  QteichStatus_SingularWeight = 5,
  // Representation-level failure (load/weight mismatch, off-scalar power, ...).
  QteichStatus_Rep = 6,
  // The two representations of an intertwiner solve are not isomorphic.
  QteichStatus_NotIsomorphic = 7,
  // The intertwining system failed the rank-one null-space gate.
  QteichStatus_NullSpaceGate = 8,
  // A phase that must be an N-th root of unity failed to snap to one.
  QteichStatus_PhaseSnap = 9,
  // The per-face phase equations of a same-triangulation solve are insoluble.
  QteichStatus_InconsistentLoads = 10,
  // The weights are not fixed by the requested path + relabeling.
  QteichStatus_NotFixedPoint = 11,
  // Degenerate development (coincident ideal vertices).
  QteichStatus_Degenerate = 12,
  // A matrix that must be inverted is numerically singular.
  QteichStatus_SingularMatrix = 13,
  // The peripheral element is too close to +/- identity for an eigenline.
  QteichStatus_AmbiguousEigenline = 14,
  // Requested operator dimension exceeds the configured cap.
  QteichStatus_DimCap = 15,
  // I/O failure.
  QteichStatus_Io = 16,
  // Malformed JSON.
  QteichStatus_Json = 17,
  // Malformed inline input (unknown fixture name, bad literal, ...).
  QteichStatus_Parse = 18,
  // A required pointer argument was null.
  QteichStatus_NullArgument = 100,
  // A string argument was not valid UTF-8.
  QteichStatus_InvalidUtf8 = 101,
  // A caller-provided buffer has the wrong length for the result.
  QteichStatus_BufferLength = 102,
  // An internal panic was caught at the boundary.
  QteichStatus_Panic = 103,
};
#ifndef __cplusplus
typedef int32_t QteichStatus;
#endif // __cplusplus

// Local representation of the edge algebra at a root of unity (opaque).
typedef struct QteichRep QteichRep;

// Triangulated punctured surface (opaque).
typedef struct QteichTriangulation QteichTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying library, as a static NUL-terminated string.
const char *qteich_version(void);

// Short static name for a status code (e.g. `"ok"`, `"params"`).
const char *qteich_status_name(QteichStatus status);

// Copy the message of the most recent error on this thread into `buf`
// (capacity `cap`; the copy is NUL-terminated and truncated to fit).
//
// Returns the full size the message needs, including the NUL terminator,
// or 0 if no error has occurred since the last successful call.  Call with
// `buf == NULL` (or `cap == 0`) to query the size first.
//
// # Safety
// `buf` must be null or valid for writes of `cap` bytes.
size_t qteich_last_error(char *buf, size_t cap);

// Build one of the built-in example surfaces by name: `"triangle"`,
// `"square"`, `"pentagon"`, `"hexagon"`, `"torus"`, `"sphere4"`, or
// `"monogon"`.
//
// On success writes a fresh handle to `*out`; release it with
// [`qteich_triangulation_free`].
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` a valid pointer.
QteichStatus qteich_triangulation_fixture(const char *name, struct QteichTriangulation **out);

// Parse a triangulation from a JSON document (either the gluing-pair form
// `{"faces": m, "gluing": [[[j, s], [j2, s2]], ...]}` or an explicit
// 1-based face table `{"faces": [[e1, e2, e3], ...]}`).
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
QteichStatus qteich_triangulation_from_json(const char *json, struct QteichTriangulation **out);

// Serialize a triangulation to its JSON document (gluing-pair form) and
// copy it into `buf` (capacity `cap`, NUL-terminated, truncated to fit).
//
// Returns the full size the document needs including the NUL terminator,
// or 0 if `t` is null.  Call with `buf == NULL` to query the size.
//
// # Safety
// `t` must be a live handle; `buf` null or valid for `cap` bytes.
size_t qteich_triangulation_to_json(const struct QteichTriangulation *t, char *buf, size_t cap);

// Release a triangulation handle.  Passing null is a no-op.
//
// # Safety
// `t` must be null or a handle returned by this library, released once.
void qteich_triangulation_free(struct QteichTriangulation *t);

// Number of triangular faces, or 0 if `t` is null.
//
// # Safety
// `t` must be null or a live handle.
size_t qteich_triangulation_faces(const struct QteichTriangulation *t);

// Number of edges, or 0 if `t` is null.
//
// # Safety
// `t` must be null or a live handle.
size_t qteich_triangulation_edges(const struct QteichTriangulation *t);

// Write the skew-symmetric exponent matrix of the edge algebra into `out`
// as a row-major `edges x edges` block of 64-bit integers.  `len` must be
// exactly `edges * edges`.
//
// # Safety
// `t` must be a live handle and `out` valid for writes of `len` integers.
QteichStatus qteich_sigma(const struct QteichTriangulation *t, int64_t *out, size_t len);

// Flip the diagonal `edge` (0-based) and write the new triangulation to
// `*out`.  Release the new handle with [`qteich_triangulation_free`].
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
QteichStatus qteich_flip(const struct QteichTriangulation *t,
                         size_t edge,
                         struct QteichTriangulation **out);

// Transport a weight system through the flip of `edge` (0-based): reads
// `n_weights` complex weights (interleaved `[re, im]`, one per edge) and
// writes the same number of transported weights for the flipped
// triangulation to `out`.
//
// # Safety
// `weights` must hold `2 * n_weights` doubles and `out` must have room for
// the same number.
QteichStatus qteich_flip_weights(const struct QteichTriangulation *t,
                                 const double *weights,
                                 size_t n_weights,
                                 size_t edge,
                                 double *out);

// Build the canonical local representation of the edge algebra at
// `q = -exp(i pi c / N)` from one nonzero complex weight per edge.
//
// The total load is fixed to `omega^load_root` times the principal N-th
// root of the product of the weights, where `omega = q^2`.  `dim_cap`
// bounds the total operator dimension `N^faces` (use e.g. 4096).
//
// # Safety
// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
// and `out` must be a valid pointer.
QteichStatus qteich_rep_build(const struct QteichTriangulation *t,
                              size_t n,
                              int64_t c,
                              const double *weights,
                              size_t n_weights,
                              int64_t load_root,
                              size_t dim_cap,
                              struct QteichRep **out);

// Release a representation handle.  Passing null is a no-op.
//
// # Safety
// `r` must be null or a handle returned by this library, released once.
void qteich_rep_free(struct QteichRep *r);

// Total operator dimension (`N^faces`), or 0 if `r` is null.
//
// # Safety
// `r` must be null or a live handle.
size_t qteich_rep_dim(const struct QteichRep *r);

// Classify a representation: the N-th power of each edge generator must be
// scalar to relative tolerance `tol`; the scalars (one complex weight per
// edge) are written to `out_x` and the total load to `out_h`.
//
// `x_len` is the number of complex entries `out_x` can hold and must equal
// the edge count.
//
// # Safety
// `r` must be a live handle, `out_x` valid for `2 * x_len` doubles, and
// `out_h` valid for 2 doubles.
QteichStatus qteich_rep_classify(const struct QteichRep *r,
                                 double tol,
                                 double *out_x,
                                 size_t x_len,
                                 double *out_h);

// Solve the elementary intertwiner for the flip at `edge` (0-based): writes
// the `dim x dim` operator row-major (interleaved complex) to `out_matrix`
// and the worst relative residual of the five transported generator
// relations to `out_residual`.
//
// `matrix_len` is the number of complex entries `out_matrix` can hold and
// must equal `dim * dim`.
//
// # Safety
// `r` must be a live handle, `out_matrix` valid for `2 * matrix_len`
// doubles, and `out_residual` valid for one double.
QteichStatus qteich_rep_flip_intertwiner(const struct QteichRep *r,
                                         size_t edge,
                                         double *out_matrix,
                                         size_t matrix_len,
                                         double *out_residual);

// Develop the pleated surface for positive-real-capable weights and
// recompute every interior edge weight as a cross-ratio of the developed
// quad; writes the largest relative drift to `out_max_residual`.
//
// # Safety
// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
// and `out_max_residual` must be valid for one double.
QteichStatus qteich_holonomy_roundtrip(const struct QteichTriangulation *t,
                                       const double *weights,
                                       size_t n_weights,
                                       double *out_max_residual);

// Check the signed total-load identity `(-1)^p a_1^{-1} ... a_p^{-1} =
// x_1 ... x_n` over a closed surface, with the default lift signs.
//
// Writes the signed eigenvalue product as `out_load[0..2]` (interleaved
// complex), the relative residual of the identity to `out_residual`, and
// the residual of the lift-free squared identity to `out_squared_residual`.
//
// # Safety
// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
// `out_load` must be valid for 2 doubles, and the two residual pointers
// for one double each.
QteichStatus qteich_total_load(const struct QteichTriangulation *t,
                               const double *weights,
                               size_t n_weights,
                               double *out_load,
                               double *out_residual,
                               double *out_squared_residual);

// Compute the projective invariants of the intertwiner assigned to a
// mapping class, given as a flip path (0-based edges) followed by an edge
// relabeling (`relabel[old] = new`, a permutation of `0..edges`) that fixes
// the weight system.
//
// Writes the scale-free trace modulus to `out_scale_free_trace` and the
// trace phase reduced to the sector `[0, 2 pi / dim)` to
// `out_phase_sector`.
//
// # Safety
// `t` must be a live handle; `weights`, `path`, and `relabel` must hold
// `2 * n_weights` doubles, `path_len` and `relabel_len` entries; the two
// output pointers must each be valid for one double.  `path` may be null
// only when `path_len == 0`.
QteichStatus qteich_mapping_class_invariant(const struct QteichTriangulation *t,
                                            size_t n,
                                            int64_t c,
                                            const double *weights,
                                            size_t n_weights,
                                            const size_t *path,
                                            size_t path_len,
                                            const size_t *relabel,
                                            size_t relabel_len,
                                            int64_t load_root,
                                            size_t dim_cap,
                                            double *out_scale_free_trace,
                                            double *out_phase_sector);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTEICH_H */
