#ifndef GRAPHSIG_H
#define GRAPHSIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_INVALID_ARGUMENT = 1,
  GS_STATUS_NULL_POINTER = 2,
  GS_STATUS_DISCONNECTED = 3,
  GS_STATUS_UNSUPPORTED = 4,
  GS_STATUS_DOMAIN = 5,
  GS_STATUS_NUMERIC = 6,
  GS_STATUS_PANIC = 7,
} GsStatus;

/**
 * Laplacian used by a spectrum.
 */
typedef enum GsVariant {
  GS_VARIANT_COMBINATORIAL = 0,
  GS_VARIANT_NORMALIZED = 1,
} GsVariant;

/**
 * Opaque weighted undirected graph.
 */
typedef struct GsGraph GsGraph;

/**
 * Opaque spectral kernel.
 */
typedef struct GsKernel GsKernel;

/**
 * Opaque Laplacian eigendecomposition.
 */
typedef struct GsSpectrum GsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gs_last_error(void);

/**
 * Builds a graph on `n` vertices from `m` undirected edges
 * `(src[k], dst[k], weight[k])`.
 *
 * # Safety
 * `src`, `dst` and `weight` must each point to `m` readable elements (or
 * may be NULL when `m == 0`); `out` must be writable.
 */
enum GsStatus gs_graph_from_edges(size_t n,
                                  const size_t *src,
                                  const size_t *dst,
                                  const double *weight,
                                  size_t m,
                                  struct GsGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from [`gs_graph_from_edges`] not yet freed.
 */
void gs_graph_free(struct GsGraph *g);

/**
 * Number of vertices, or 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t gs_graph_num_vertices(const struct GsGraph *g);

/**
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t gs_graph_num_edges(const struct GsGraph *g);

/**
 * Upper bound on the largest combinatorial Laplacian eigenvalue.
 *
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum GsStatus gs_lambda_max_bound(const struct GsGraph *g, double *out);

/**
 * Full eigendecomposition of the Laplacian selected by `variant`, one of
 * the [`GsVariant`] values. Fails with `GS_STATUS_DISCONNECTED` on
 * disconnected graphs.
 *
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum GsStatus gs_spectrum_compute(const struct GsGraph *g,
                                  uint32_t variant,
                                  struct GsSpectrum **out);

/**
 * # Safety
 * `s` must be NULL or a live spectrum handle.
 */
void gs_spectrum_free(struct GsSpectrum *s);

/**
 * Number of eigenpairs, or 0 for a NULL handle.
 *
 * # Safety
 * `s` must be NULL or a live spectrum handle.
 */
size_t gs_spectrum_len(const struct GsSpectrum *s);

/**
 * Copies the ascending eigenvalues into `out[0..n]`.
 *
 * # Safety
 * `s` must be a live spectrum handle and `out` must hold `n` doubles.
 */
enum GsStatus gs_spectrum_eigenvalues(const struct GsSpectrum *s, double *out, size_t n);

/**
 * Copies eigenvector `l` into `out[0..n]`.
 *
 * # Safety
 * `s` must be a live spectrum handle and `out` must hold `n` doubles.
 */
enum GsStatus gs_spectrum_eigenvector(const struct GsSpectrum *s, size_t l, double *out, size_t n);

/**
 * Graph Fourier transform of `f[0..n]` into `out[0..n]`.
 *
 * # Safety
 * `s` must be a live spectrum handle; `f` and `out` must hold `n` doubles.
 */
enum GsStatus gs_gft(const struct GsSpectrum *s, const double *f, double *out, size_t n);

/**
 * Inverse graph Fourier transform.
 *
 * # Safety
 * Same as [`gs_gft`].
 */
enum GsStatus gs_igft(const struct GsSpectrum *s, const double *fhat, double *out, size_t n);

/**
 * Heat kernel `exp(-tau * lambda)`, `tau >= 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_kernel_heat(double tau, struct GsKernel **out);

/**
 * Tikhonov kernel `1 / (1 + gamma * lambda)`, `gamma > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_kernel_tikhonov(double gamma, struct GsKernel **out);

/**
 * Polynomial kernel `sum_k coeffs[k] * lambda^k`.
 *
 * # Safety
 * `coeffs` must hold `len` doubles and `out` must be writable.
 */
enum GsStatus gs_kernel_polynomial(const double *coeffs, size_t len, struct GsKernel **out);

/**
 * # Safety
 * `k` must be NULL or a live kernel handle.
 */
void gs_kernel_free(struct GsKernel *k);

/**
 * Exact spectral filtering `U k(Lambda) U^T f`.
 *
 * # Safety
 * Handles must be live; `f` and `out` must hold `n` doubles.
 */
enum GsStatus gs_filter_exact(const struct GsSpectrum *s,
                              const struct GsKernel *k,
                              const double *f,
                              double *out,
                              size_t n);

/**
 * Chebyshev approximation of order `order` of the combinatorial-Laplacian
 * filter; needs no eigendecomposition.
 *
 * # Safety
 * Handles must be live; `f` and `out` must hold `n` doubles.
 */
enum GsStatus gs_filter_chebyshev(const struct GsGraph *g,
                                  const struct GsKernel *k,
                                  size_t order,
                                  const double *f,
                                  double *out,
                                  size_t n);

/**
 * Kernel translated to `vertex`: `sqrt(N) * k(L) delta_vertex`.
 *
 * # Safety
 * Handles must be live; `out` must hold `n` doubles.
 */
enum GsStatus gs_translate(const struct GsSpectrum *s,
                           const struct GsKernel *k,
                           size_t vertex,
                           double *out,
                           size_t n);

/**
 * Tikhonov denoising: solves `(I + gamma L) x = y` by conjugate gradients.
 *
 * # Safety
 * `g` must be live; `y` and `out` must hold `n` doubles.
 */
enum GsStatus gs_tikhonov_denoise(const struct GsGraph *g,
                                  const double *y,
                                  double gamma,
                                  double *out,
                                  size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHSIG_H */
