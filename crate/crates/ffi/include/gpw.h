/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef GPW_H
#define GPW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// `N = sqrt(beta(G))`.
#define GPW_NORM_BETA 0

// `N = i`.
#define GPW_NORM_CONST 1

// `N` given by the caller.
#define GPW_NORM_CUSTOM 2

#define GPW_QUAD_BOOLE5 0

#define GPW_QUAD_WEDDLE7 1

#define GPW_QUAD_NC10 2

// Result of a call.
typedef enum GpwStatus {
  GPW_STATUS_OK = 0,
  GPW_STATUS_NULL_POINTER = 1,
  GPW_STATUS_INVALID_ARGUMENT = 2,
  GPW_STATUS_ZERO_LOCAL_WAVENUMBER = 3,
  GPW_STATUS_UNSUPPORTED_DERIVATIVE_ORDER = 4,
  GPW_STATUS_ORDER_TOO_LARGE = 5,
  GPW_STATUS_ZERO_N = 6,
  GPW_STATUS_MIXED_ANCHORS = 7,
  GPW_STATUS_RANK_DEFICIENT = 8,
  GPW_STATUS_OUT_OF_VALIDATED_RANGE = 9,
  GPW_STATUS_BREAKLINE_MISALIGNED = 10,
  GPW_STATUS_Q_OUT_OF_RANGE = 11,
  GPW_STATUS_SINGULAR_SYSTEM = 12,
  GPW_STATUS_POINT_OUTSIDE_MESH = 13,
  GPW_STATUS_DEGENERATE_NORM = 14,
  GPW_STATUS_PARSE = 15,
  GPW_STATUS_PANIC = 16,
} GpwStatus;

// Coefficient field `beta`.
typedef struct GpwField GpwField;

// A designed generalized plane wave.
typedef struct GpwWave GpwWave;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *gpw_last_error(void);

// Releases a string returned by the library.
//
// # Safety
// `s` must come from this library and not have been freed.
void gpw_string_free(char *s);

// `beta = a x + b y + c`.
//
// # Safety
// `out` must be valid for writes.
enum GpwStatus gpw_field_affine(double a, double b, double c, struct GpwField **out);

// `beta = c`.
//
// # Safety
// `out` must be valid for writes.
enum GpwStatus gpw_field_constant(double c, struct GpwField **out);

// Piecewise-linear cut-off profile with parameter `kappa`.
//
// # Safety
// `out` must be valid for writes.
enum GpwStatus gpw_field_cutoff(double kappa, struct GpwField **out);

// Value of `beta` at `(x, y)`.
//
// # Safety
// `field` must be a live handle; `out` must be valid for writes.
enum GpwStatus gpw_field_value(const struct GpwField *field, double x, double y, double *out);

// # Safety
// `field` must be null or a live handle, released once.
void gpw_field_free(struct GpwField *field);

// Designs a wave of order `q` and direction `theta` at `(x, y)`.
// `n_re`, `n_im` are only read for `GPW_NORM_CUSTOM`.
//
// # Safety
// `field` must be a live handle; `out` must be valid for writes.
enum GpwStatus gpw_wave_design(const struct GpwField *field,
                               double x,
                               double y,
                               uint32_t q,
                               double theta,
                               uint32_t norm_kind,
                               double n_re,
                               double n_im,
                               struct GpwWave **out);

// Parses a wave record.
//
// # Safety
// `record` must be a NUL-terminated string; `out` must be valid for writes.
enum GpwStatus gpw_wave_from_record(const char *record, struct GpwWave **out);

// Text record of the wave; release with [`gpw_string_free`].
//
// # Safety
// `wave` must be a live handle; `out` must be valid for writes.
enum GpwStatus gpw_wave_to_record(const struct GpwWave *wave, char **out);

// `phi(x, y)`.
//
// # Safety
// `wave` must be a live handle; `re`, `im` must be valid for writes.
enum GpwStatus gpw_wave_eval(const struct GpwWave *wave,
                             double x,
                             double y,
                             double *re,
                             double *im);

// Gradient as `[re dx, im dx, re dy, im dy]`.
//
// # Safety
// `wave` must be a live handle; `out` must be valid for 4 writes.
enum GpwStatus gpw_wave_grad(const struct GpwWave *wave, double x, double y, double *out);

// Phase coefficient `lambda_{i,j}`; zero beyond the stored degree.
//
// # Safety
// `wave` must be a live handle; `re`, `im` must be valid for writes.
enum GpwStatus gpw_wave_lambda(const struct GpwWave *wave,
                               uint32_t i,
                               uint32_t j,
                               double *re,
                               double *im);

// Approximation order `q` of the wave.
//
// # Safety
// `wave` must be a live handle; `out` must be valid for writes.
enum GpwStatus gpw_wave_order(const struct GpwWave *wave, uint32_t *out);

// # Safety
// `wave` must be null or a live handle, released once.
void gpw_wave_free(struct GpwWave *wave);

// Fits `Ai(x) exp(i y)` at `(x, y)` with `2n + 1` waves for `beta = x - 1`
// and reports the largest value and gradient errors on the disk of radius
// `h`.
//
// # Safety
// `err_value`, `err_grad` must be valid for writes.
enum GpwStatus gpw_airy_disk_error(double x,
                                   double y,
                                   uint32_t n,
                                   uint32_t norm_kind,
                                   double h,
                                   double *err_value,
                                   double *err_grad);

// UWVF solve of the Airy problem on `[-6, 3] x [-1, 1]` with `nx * ny`
// cells and `Q = 0`; reports the relative centre error and the condition
// estimate.
//
// # Safety
// `error`, `cond` must be valid for writes.
enum GpwStatus gpw_uwvf_airy(uint32_t nx,
                             uint32_t ny,
                             uint32_t n,
                             uint32_t norm_kind,
                             uint32_t quad_kind,
                             double gamma,
                             double *error,
                             double *cond);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPW_H */
