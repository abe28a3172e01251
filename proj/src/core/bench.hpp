#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "engine.hpp"

namespace mz {

// Aggregates for one (method, prediction mode) cell, pooled over trials.
struct CellMetrics {
  DetectorKind method = DetectorKind::correlation_track;
  PredictionMode mode = PredictionMode::none;
  long trials = 0;
  double mean_detect_latency_s = 0.0;
  double tracking_success_pct = 0.0;     // visible mosquito-frames covered
  double neutralization_pct = 0.0;       // mosquitoes killed
  double survival_after_pulse_pct = 0.0; // pulses whose best-covered target lived
  double mean_time_to_kill_s = 0.0;
  long lost_track_events = 0;
  long fires = 0;
  long kills = 0;
  long frames_rendered = 0;
  double episode_wall_s = 0.0;  // summed per-episode wall clocks (core-seconds)
};

struct MetricsReport {
  std::vector<CellMetrics> cells;
  std::uint64_t seed_base = 0;
  long trials = 0;
  int threads = 0;
  double wall_clock_s = 0.0;  // whole bench
};

// Runs methods x modes x trials episodes. Trial t uses seed seed_base + t
// in every cell, so cells are compared over the same flights. Episodes run
// on `threads` workers (0 = hardware), results land in preassigned slots and
// are reduced sequentially, so the report is independent of thread count and
// scheduling.
MetricsReport bench(const SimConfig& cfg,
                    const std::vector<DetectorKind>& methods,
                    const std::vector<PredictionMode>& modes, int trials,
                    std::uint64_t seed_base, int threads = 0);

// Fixed column order:
// method,prediction_mode,trials,mean_detect_latency_s,tracking_success_pct,
// neutralization_pct,survival_after_pulse_pct,mean_time_to_kill_s
std::string bench_csv(const MetricsReport& r);
std::string bench_json(const MetricsReport& r, const SimConfig& cfg);

// One bench row per value assigned to `key`, run with the configured
// detector/mode only. First CSV column is named after the key.
std::string sweep_csv(const SimConfig& base, const std::string& key,
                      const std::vector<std::string>& values, int trials,
                      std::uint64_t seed_base, int threads = 0);

}  // namespace mz
