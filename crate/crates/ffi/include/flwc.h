#ifndef FLWC_H
#define FLWC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  FLWC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FLWC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  FLWC_STATUS_INVALID_UTF8 = 2,
  /**
   * A value or configuration was rejected; see the last error message.
   */
  FLWC_STATUS_INVALID_ARGUMENT = 3,
  /**
   * An input was outside its mathematical domain.
   */
  FLWC_STATUS_DOMAIN_ERROR = 4,
  /**
   * A rule, membership or configuration file failed to parse.
   */
  FLWC_STATUS_PARSE_ERROR = 5,
  /**
   * A file could not be read.
   */
  FLWC_STATUS_IO_ERROR = 6,
} FlwcStatus;

/**
 * Opaque handle over a scenario configuration.
 */
typedef struct FlwcConfig FlwcConfig;

/**
 * Opaque handle over an assembled fuzzy inference system.
 */
typedef struct FlwcFis FlwcFis;

/**
 * Paired comparison of the two schemes on one sampled fleet.
 */
typedef struct {
  uint64_t seed;
  uint32_t flwc_served;
  uint32_t fcfs_served;
  uint32_t flwc_unserved;
  uint32_t fcfs_unserved;
  double flwc_avg_utilization;
  double fcfs_avg_utilization;
  /**
   * Served-count difference, weight scheme minus arrival order.
   */
  int64_t served_delta;
  /**
   * Average-utilization difference, weight scheme minus arrival order.
   */
  double avg_utilization_delta;
} FlwcComparison;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays
 * valid until the next failing call on the same thread. Never null.
 */
const char *flwc_last_error_message(void);

/**
 * Creates the built-in inference system. Never fails; free with
 * [`flwc_fis_free`].
 */
FlwcFis *flwc_fis_default(void);

/**
 * Builds an inference system from optional rule-base and
 * membership-parameter files (either may be null to keep the built-in
 * part). On success writes a handle to `out_fis`.
 *
 * # Safety
 * `rules_path` and `mf_path` must each be null or valid NUL-terminated
 * strings; `out_fis` must be a valid pointer.
 */
FlwcStatus flwc_fis_from_files(const char *rules_path, const char *mf_path, FlwcFis **out_fis);

/**
 * Computes the scheduling weight for normalized state of charge and stay
 * time, both in [0, 1].
 *
 * # Safety
 * `fis` must be a live handle from this library; `out_weight` must be a
 * valid pointer.
 */
FlwcStatus flwc_fis_compute_weight(const FlwcFis *fis,
                                   double soc,
                                   double stay_time,
                                   double *out_weight);

/**
 * Releases a handle from [`flwc_fis_default`] or [`flwc_fis_from_files`].
 * Null is accepted and ignored.
 *
 * # Safety
 * `fis` must be null or a handle not yet freed.
 */
void flwc_fis_free(FlwcFis *fis);

/**
 * Creates the built-in scenario configuration. Never fails; free with
 * [`flwc_config_free`].
 */
FlwcConfig *flwc_config_default(void);

/**
 * Loads a key-value configuration file over the defaults.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out_config` must be a
 * valid pointer.
 */
FlwcStatus flwc_config_from_file(const char *path, FlwcConfig **out_config);

/**
 * Sets one configuration field from its textual key and value, using the
 * same keys as the configuration file.
 *
 * # Safety
 * `config` must be a live handle; `key` and `value` must be valid
 * NUL-terminated strings.
 */
FlwcStatus flwc_config_set(FlwcConfig *config, const char *key, const char *value);

/**
 * Releases a configuration handle. Null is accepted and ignored.
 *
 * # Safety
 * `config` must be null or a handle not yet freed.
 */
void flwc_config_free(FlwcConfig *config);

/**
 * Samples the fleet for `seed`, runs both schemes on it and writes the
 * paired comparison to `out`.
 *
 * # Safety
 * `config` and `fis` must be live handles; `out` must be a valid pointer.
 */
FlwcStatus flwc_compare(const FlwcConfig *config,
                        const FlwcFis *fis,
                        uint64_t seed,
                        FlwcComparison *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLWC_H */
