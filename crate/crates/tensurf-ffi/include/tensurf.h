#ifndef TENSURF_H
#define TENSURF_H

/* This file is generated by cbindgen from tensurf-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible C-ABI call.
 */
typedef enum TsfStatus {
  TsfStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  TsfStatus_NullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TsfStatus_InvalidUtf8 = 2,
  /**
   * Bad selector, identity name or parameter value.
   */
  TsfStatus_InvalidArgument = 3,
  /**
   * Parameter point outside the surface domain.
   */
  TsfStatus_OutsideDomain = 4,
  /**
   * Singular or near-singular metric at the requested point.
   */
  TsfStatus_SingularMetric = 5,
  /**
   * Operation requires a closed surface.
   */
  TsfStatus_NotClosed = 6,
  /**
   * Operation requires a patch with a boundary.
   */
  TsfStatus_NotPatch = 7,
  /**
   * Operation not defined for this surface dimension.
   */
  TsfStatus_UnsupportedDimension = 8,
  /**
   * Non-finite value encountered.
   */
  TsfStatus_NonFinite = 9,
  /**
   * Any other numerical failure.
   */
  TsfStatus_Numerical = 10,
} TsfStatus;

/**
 * Opaque handle of a parametric surface (closed surface or patch).
 */
typedef struct TsfSurface TsfSurface;

/**
 * Geometry bundle of one surface point. `gaussian_curvature` is NaN where
 * undefined (three-parameter surfaces). Only the first `ambient_dim`
 * entries of the vectors are meaningful.
 */
typedef struct TsfSample {
  uint32_t param_dim;
  uint32_t ambient_dim;
  double position[4];
  double normal[4];
  double area_element;
  double mean_curvature;
  double gaussian_curvature;
  double scalar_curvature;
} TsfSample;

/**
 * Pointwise residuals of the structural equations. `gauss` is NaN for
 * three-parameter surfaces.
 */
typedef struct TsfResiduals {
  double weingarten;
  double codazzi;
  double gauss;
} TsfResiduals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static C string.
 */
const char *tsf_version(void);

/**
 * Message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tsf_last_error(void);

/**
 * Builds a surface from a selector such as `"torus:R=2,r=0.5"`; see
 * `tensurf list` for the catalog. On success `*out` owns the handle.
 *
 * # Safety
 * `selector` must be a valid NUL-terminated string and `out` a valid
 * pointer; the returned handle must be released with [`tsf_surface_free`].
 */
enum TsfStatus tsf_surface_new(const char *selector, struct TsfSurface **out);

/**
 * Releases a handle returned by [`tsf_surface_new`]. Null is a no-op.
 *
 * # Safety
 * `surface` must be null or a pointer obtained from [`tsf_surface_new`]
 * that has not been freed already.
 */
void tsf_surface_free(struct TsfSurface *surface);

/**
 * Number of surface parameters (2 or 3); 0 for a null handle.
 *
 * # Safety
 * `surface` must be null or a live handle.
 */
uint32_t tsf_surface_param_dim(const struct TsfSurface *surface);

/**
 * Ambient dimension (3 or 4); 0 for a null handle.
 *
 * # Safety
 * `surface` must be null or a live handle.
 */
uint32_t tsf_surface_ambient_dim(const struct TsfSurface *surface);

/**
 * Evaluates the geometry bundle at a parameter point of length
 * `point_len` (must equal the parameter dimension).
 *
 * # Safety
 * `surface` must be a live handle, `point` must reference `point_len`
 * doubles, and `out` must be a valid pointer.
 */
enum TsfStatus tsf_surface_sample(const struct TsfSurface *surface,
                                  const double *point,
                                  uintptr_t point_len,
                                  struct TsfSample *out);

/**
 * Evaluates the Weingarten, Codazzi and Gauss residuals at a parameter
 * point. Pass 0 for either step to use the defaults (1e-5 analytic,
 * 1e-4 computed).
 *
 * # Safety
 * Same contracts as [`tsf_surface_sample`].
 */
enum TsfStatus tsf_surface_residuals(const struct TsfSurface *surface,
                                     const double *point,
                                     uintptr_t point_len,
                                     double fd_step_analytic,
                                     double fd_step_computed,
                                     struct TsfResiduals *out);

/**
 * Runs one integral identity (by its id, e.g. `"IN=0"`, `"IR.NK"`,
 * `"patch-N"`) at `resolution` nodes per axis and `boundary_nodes` line
 * nodes per boundary segment (0 for the default). `*out_json` receives a
 * JSON array of report objects, to be released with [`tsf_string_free`].
 *
 * # Safety
 * `surface` must be a live handle; `identity` a valid NUL-terminated
 * string; `out_json` a valid pointer.
 */
enum TsfStatus tsf_identity_check(const struct TsfSurface *surface,
                                  const char *identity,
                                  uint32_t resolution,
                                  uint32_t boundary_nodes,
                                  char **out_json);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `text` must be null or a pointer returned by a `tensurf-ffi` call that
 * has not been freed already.
 */
void tsf_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TENSURF_H */
