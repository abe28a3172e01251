/* moszap: closed-loop laser mosquito-interception simulator.
 *
 * C API over an opaque configuration handle. All functions returning
 * mz_status report failure detail through mz_last_error() (thread-local).
 * Status values double as process exit codes: 0 ok, 2 bad configuration,
 * 3 runtime failure, 4 invalid call.
 */
#ifndef MOSZAP_H
#define MOSZAP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mz_status {
  MZ_OK = 0,
  MZ_ERR_CONFIG = 2,
  MZ_ERR_RUNTIME = 3,
  MZ_ERR_INVALID = 4
} mz_status;

const char* mz_version(void);
const char* mz_status_name(mz_status s);
/* Message for the calling thread's most recent failure; "" when none. */
const char* mz_last_error(void);

/* ---- configuration ----
 * Flat dotted keys ("flight.s_max", "pipeline.detector", ...), one
 * `key = value` per line in files, '#' comments. mz_config_create yields the
 * built-in defaults; every key can be read back with mz_config_get. */
typedef struct mz_config mz_config;

mz_config* mz_config_create(void);
void mz_config_free(mz_config* cfg);
mz_status mz_config_load(mz_config* cfg, const char* path);
mz_status mz_config_set(mz_config* cfg, const char* key, const char* value);
/* Copies the value into buf, NUL-terminated; fails with MZ_ERR_INVALID when
 * buf_len cannot hold it. */
mz_status mz_config_get(const mz_config* cfg, const char* key, char* buf,
                        size_t buf_len);
mz_status mz_config_save(const mz_config* cfg, const char* path);

/* ---- one episode ---- */
typedef struct mz_episode_summary {
  int32_t mosquito_count;
  int32_t kills;
  int64_t fires;
  int64_t frames_captured;
  int64_t frames_rendered;
  int64_t detections;
  int64_t lost_track_events;
  double tracking_success_pct;
  double neutralization_pct;
  double mean_time_to_kill_s;
  double wall_clock_s;
} mz_episode_summary;

/* Runs one closed-loop episode. out_dir (nullable): writes tracks.csv,
 * fires.csv and events.log there. verbose != 0: event lines go to stdout.
 * summary (nullable) receives the aggregate numbers. */
mz_status mz_simulate(const mz_config* cfg, uint64_t seed, const char* out_dir,
                      int verbose, mz_episode_summary* summary);

/* ---- benchmark grid ----
 * methods_csv: comma-separated subset of
 *   frame_diff,color,correlation_track,profiled (NULL = all four).
 * modes_csv: comma-separated subset of none,linear,flight_model
 *   (NULL = "none,flight_model").
 * format: "csv" or "json" (NULL = csv). out_path NULL = stdout.
 * threads: worker count, 0 = one per hardware thread. */
mz_status mz_bench(const mz_config* cfg, uint64_t seed_base, int trials,
                   const char* methods_csv, const char* modes_csv,
                   const char* out_path, const char* format, int threads);

/* Renders the first `frames` synthetic stereo frames plus detection
 * intermediates and a truth-centroid table into out_dir. */
mz_status mz_render_dump(const mz_config* cfg, uint64_t seed, int frames,
                         const char* out_dir);

/* One benchmark row per value in values_csv assigned to `key`, using the
 * configured detector and prediction mode. CSV only. */
mz_status mz_sweep(const mz_config* cfg, const char* key,
                   const char* values_csv, int trials, uint64_t seed_base,
                   const char* out_path, int threads);

#ifdef __cplusplus
}
#endif
#endif /* MOSZAP_H */
