#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace mz {

// Seed-stream tags (derive_seed(episode_seed, tag)): one independent stream
// per stochastic subsystem, shared by the engine and the frame dumps so a
// dumped frame is byte-identical to the one the pipeline saw.
inline constexpr std::uint64_t kSeedTagScene = 0x51;
inline constexpr std::uint64_t kSeedTagRenderNoise = 0x52;
inline constexpr std::uint64_t kSeedTagProfiledDetect = 0x53;
inline constexpr std::uint64_t kSeedTagKill = 0x54;

// One completed laser pulse. `overlap_integral` and `killed` describe the
// mosquito that collected the most beam overlap during the dwell.
struct FireRecord {
  double time_s = 0.0;  // dwell start
  Vec3 aim;
  double dwell_s = 0.0;
  int target_track_id = -1;
  int best_mosquito = -1;  // -1: nothing overlapped the beam
  double overlap_integral = 0.0;
  bool killed = false;
};

struct TrackLogRow {
  int track_id = 0;
  double timestamp = 0.0;
  double u = 0.0, v = 0.0;
  Vec3 world;
  Lifecycle lifecycle = Lifecycle::tentative;
};

struct EpisodeResult {
  std::vector<std::optional<double>> killed_at;  // per mosquito id, seconds
  long frames_captured = 0;
  long frames_rendered = 0;  // render_frame calls (lazy; profiled renders none)
  long mosquito_frames_visible = 0;    // alive + inside the left frame, per frame
  long mosquito_frames_contained = 0;  // of those, covered by an active track gate
  long detections = 0;        // left-camera detections over all epochs
  long detection_epochs = 0;
  double latency_sum_s = 0.0;  // summed over epochs (mean = sum / epochs)
  long fires = 0;              // completed dwells (a dwell cut off by episode end
                               // is not counted)
  long lost_track_events = 0;
  double wall_clock_s = 0.0;
  std::vector<FireRecord> fire_log;
  std::vector<TrackLogRow> track_log;  // filled when log_tracks

  int kills() const {
    int n = 0;
    for (const auto& k : killed_at) n += k.has_value();
    return n;
  }
};

// Runs one closed-loop episode: frame capture at 30 fps, detector with the
// configured latency (one inference in flight at a time; frames arriving
// while it is busy are skipped), association/tracking, target selection,
// galvo move + dwell, and stochastic kills scored against the per-mosquito
// beam-overlap time integral. Deterministic for a given (config, seed).
EpisodeResult run_episode(const SimConfig& cfg, std::uint64_t seed,
                          bool log_tracks = false,
                          std::vector<std::string>* event_log = nullptr);

// Candidate track indices in firing preference order. Eligible tracks are
// active with >= 2 history points; the track dwelled on last is excluded
// until re-observed after that dwell ended. lowest_id_first orders by id;
// nearest_first by 3-D distance from aim_points[i] (the point the laser
// would fire at, indexed like tracks) to the current beam axis, ties by id.
std::vector<int> rank_targets(const std::vector<Track>& tracks,
                              const std::vector<Vec3>& aim_points,
                              SchedulerKind kind, const GalvoState& galvo,
                              int last_dwell_track_id, double last_dwell_end);

inline double throughput(const EpisodeResult& r, double duration) {
  return duration > 0.0 ? r.kills() / duration : 0.0;
}

}  // namespace mz
