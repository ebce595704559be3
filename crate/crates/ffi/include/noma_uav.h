#ifndef NOMA_UAV_H
#define NOMA_UAV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum NomaStatus {
  NOMA_STATUS_OK = 0,
  NOMA_STATUS_NULL_POINTER = 1,
  NOMA_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed configuration or parameter.
   */
  NOMA_STATUS_INVALID_INPUT = 3,
  /**
   * Violated model assumption, infeasible grouping or rank deficiency.
   */
  NOMA_STATUS_INFEASIBLE = 4,
  /**
   * A solution failed the zero-interference check.
   */
  NOMA_STATUS_INTERFERENCE_VIOLATION = 5,
  /**
   * Output buffer too small.
   */
  NOMA_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * Unexpected internal failure.
   */
  NOMA_STATUS_INTERNAL = 7,
} NomaStatus;

/**
 * Opaque simulation configuration.
 */
typedef struct NomaConfig NomaConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *noma_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void noma_string_free(char *s);

/**
 * Creates the default configuration.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum NomaStatus noma_config_default(struct NomaConfig **out);

/**
 * Parses a JSON configuration; omitted keys take their defaults.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NomaStatus noma_config_from_json(const char *json, struct NomaConfig **out);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `cfg` must come from this library and not have been freed.
 */
void noma_config_free(struct NomaConfig *cfg);

/**
 * Serializes a configuration with every field filled in.
 *
 * # Safety
 * `cfg` must be a live configuration and `out` a valid pointer.
 */
enum NomaStatus noma_config_to_json(const struct NomaConfig *cfg, char **out);

/**
 * Maximum number of streams for `n_gbs` GBSs and `n_antennas` antennas.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum NomaStatus noma_max_dof(size_t n_gbs, size_t n_antennas, size_t *out);

/**
 * Balanced group sizes for `n_streams` streams, ascending. `out` must hold
 * `n_streams` entries.
 *
 * # Safety
 * `out` must point to `capacity` writable elements.
 */
enum NomaStatus noma_group_sizes(size_t n_gbs, size_t n_streams, size_t *out, size_t capacity);

/**
 * Water-filling of `total_power` over streams with unit-power SINRs
 * `gammas[0..len]`; powers are written to `out[0..len]`.
 *
 * # Safety
 * `gammas` and `out` must each point to `len` elements.
 */
enum NomaStatus noma_waterfill(const double *gammas, size_t len, double total_power, double *out);

/**
 * Maximum-DoF table as CSV.
 *
 * # Safety
 * `cfg` must be a live configuration and `out_csv` a valid pointer.
 */
enum NomaStatus noma_run_dof(const struct NomaConfig *cfg, char **out_csv);

/**
 * Sum-rate sweep as CSV. `modes` is a comma-separated list such as
 * `"effective_sinr,random"`.
 *
 * # Safety
 * `cfg` must be a live configuration, `modes` a NUL-terminated string and
 * `out_csv` a valid pointer.
 */
enum NomaStatus noma_run_sweep(const struct NomaConfig *cfg, const char *modes, char **out_csv);

/**
 * One end-to-end solve on the channel draw `seed`, as a JSON record.
 * `power_dbm` may be `-INFINITY` for a zero budget.
 *
 * # Safety
 * `cfg` must be a live configuration and `out_json` a valid pointer.
 */
enum NomaStatus noma_run_single(const struct NomaConfig *cfg,
                                uint64_t seed,
                                double power_dbm,
                                char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOMA_UAV_H */
