#ifndef PATCHWORK_H
#define PATCHWORK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PwStatus {
  PwStatus_Ok = 0,
  PwStatus_InputError = 1,
  PwStatus_NotFound = 2,
  PwStatus_NullPointer = 3,
  PwStatus_Panic = 4,
} PwStatus;

/**
 * Opaque tiling handle.
 */
typedef struct PwTiling PwTiling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; valid until the next call.
 */
const char *pw_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void pw_string_free(char *s);

/**
 * Parses a tiling document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PwStatus pw_tiling_from_json(const char *json, struct PwTiling **out);

/**
 * Built-in tiling: `grid`, `chair` (with `levels`) or `qp`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PwStatus pw_tiling_fixture(const char *name, uint32_t levels, struct PwTiling **out);

/**
 * # Safety
 * `t` must come from this library or be null; it is invalid afterwards.
 */
void pw_tiling_free(struct PwTiling *t);

/**
 * Distance interval between two tilings.
 *
 * # Safety
 * Handles must be live; strings NUL-terminated; `lo` and `hi` writable.
 */
enum PwStatus pw_tiling_distance(const struct PwTiling *x,
                                 const struct PwTiling *y,
                                 const char *action,
                                 const char *theta,
                                 double *lo,
                                 double *hi);

/**
 * BT search; the certificate is written as JSON to `out_json`.
 *
 * # Safety
 * `y` must be live, `lambdas` must point to `n_lambdas` values, strings
 * NUL-terminated and `out_json` writable.
 */
enum PwStatus pw_bt_search(const struct PwTiling *y,
                           const char *pattern_json,
                           double eps,
                           const double *lambdas,
                           uintptr_t n_lambdas,
                           const char *action,
                           uint32_t q_max,
                           char **out_json);

/**
 * Brown search on a coloring document; pattern is `{"points":[[..],..]}`
 * with integer coordinates. Returns `NotFound` when no certificate exists
 * up to `q_max`.
 *
 * # Safety
 * Strings must be NUL-terminated and `out_json` writable.
 */
enum PwStatus pw_brown_search(const char *coloring_json,
                              const char *pattern_json,
                              int64_t k,
                              uint32_t q_max,
                              char **out_json);

/**
 * Right-invariant distance between two rigid motions `p -> R(angle) p + v`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PwStatus pw_dist_rigid(double g_angle,
                            double g_x,
                            double g_y,
                            double h_angle,
                            double h_x,
                            double h_y,
                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATCHWORK_H */
