#ifndef NVORTEX_H
#define NVORTEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Chart normalisation of the surfaces, mirroring `GeometryMode`.
 */
typedef enum NvMode {
  NV_MODE_FIXED = 0,
  NV_MODE_NORMALISED = 1,
} NvMode;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum NvStatus {
  NV_STATUS_OK = 0,
  NV_STATUS_NULL_POINTER = 1,
  NV_STATUS_INVALID_ARGUMENT = 2,
  NV_STATUS_CONFIG = 3,
  /**
   * The point is a pole, ramification point or otherwise excluded.
   */
  NV_STATUS_EXCLUDED_POINT = 4,
  /**
   * The point lies outside the chart of the surface.
   */
  NV_STATUS_OUTSIDE_DOMAIN = 5,
  NV_STATUS_NUMERICAL = 6,
  NV_STATUS_IO = 7,
  NV_STATUS_PANIC = 8,
} NvStatus;

/**
 * Opaque handle to an exact vortex solution.
 */
typedef struct NvSolution NvSolution;

/**
 * Residuals of the two vortex equations at a point.
 */
typedef struct NvResiduals {
  double selfdual;
  double vortex2;
} NvResiduals;

/**
 * Winding number with its predicted value.
 */
typedef struct NvWinding {
  double value;
  double expected;
} NvWinding;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build the solution for the family `(c0, c2n, n, mode)` and the map
 * `f = f2/f1`. `f1` and `f2` hold `f1_len` and `f2_len` complex
 * coefficients. On success `*out` receives a new handle.
 *
 * # Safety
 * Coefficient pointers must be valid for the given lengths and `out` must
 * be writable.
 */
enum NvStatus nv_solution_new(int32_t c0,
                              int32_t c2n,
                              double n,
                              enum NvMode mode,
                              const double *f1,
                              size_t f1_len,
                              const double *f2,
                              size_t f2_len,
                              struct NvSolution **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `sol` must be null or a handle from [`nv_solution_new`] not yet freed.
 */
void nv_solution_free(struct NvSolution *sol);

/**
 * The Higgs field `φⁿ` at `z = re + i·im`.
 *
 * # Safety
 * `sol` must be a live handle; `out_re` and `out_im` must be writable.
 */
enum NvStatus nv_solution_higgs(const struct NvSolution *sol,
                                double re,
                                double im,
                                double *out_re,
                                double *out_im);

/**
 * Moduli of the vortex-equation residuals at `z`.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be writable.
 */
enum NvStatus nv_solution_residuals(const struct NvSolution *sol,
                                    double re,
                                    double im,
                                    struct NvResiduals *out);

/**
 * The conformal factor `|φ|²ⁿ` of the Baptista metric at `z`.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be writable.
 */
enum NvStatus nv_solution_baptista(const struct NvSolution *sol, double re, double im, double *out);

/**
 * Winding number by flux quadrature: over the whole sphere when `global`
 * is non-zero (needs `C0 = 1`), otherwise summed over small loops around
 * the special points.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be writable.
 */
enum NvStatus nv_solution_winding(const struct NvSolution *sol,
                                  int32_t global,
                                  struct NvWinding *out);

/**
 * Run every check of a JSON case configuration. On success `*out`
 * receives the JSON report, to be released with [`nv_string_free`]. A
 * report whose checks fail is still a success of this call.
 *
 * # Safety
 * `config_json` must be a nul-terminated string; `out` must be writable.
 */
enum NvStatus nv_run_case_json(const char *config_json, char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void nv_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *nv_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *nv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NVORTEX_H */
