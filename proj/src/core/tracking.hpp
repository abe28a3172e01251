#pragma once
#include <array>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "optics.hpp"
#include "scene_flight.hpp"
#include "vec3.hpp"
#include "vision.hpp"

namespace mz {

enum class Lifecycle { tentative, active, lost, dead_reckoned, terminated };

const char* lifecycle_name(Lifecycle lc);

struct HistoryPoint {
  double t = 0.0;
  double u = 0.0, v = 0.0;  // left-camera pixel centroid
  Vec3 world;
  bool observed = true;  // false for coasted (dead-reckoned) entries
};

struct Track {
  int id = 0;
  Lifecycle lifecycle = Lifecycle::tentative;
  std::deque<HistoryPoint> history;  // bounded, oldest first
  Vec3 velocity_estimate{0.0, 0.0, 0.0};
  GrayFrame tmpl;           // correlation template; empty pix = none
  double tmpl_score = 0.0;  // last refinement score
  int miss_count = 0;
  int hit_streak = 0;
  double coast_since = 0.0;  // entry time into lost/dead_reckoned
  // Engine-supplied gate center for tracks whose pixel extrapolation is
  // meaningless (dead reckoning outside the frustum).
  std::optional<std::array<double, 2>> gate_override;

  static constexpr std::size_t kHistoryCap = 32;

  const HistoryPoint& last() const { return history.back(); }
  const HistoryPoint* last_observed() const;
  // Pixel-plane velocity from the two most recent observed points (px/s).
  std::array<double, 2> pixel_velocity() const;
  // Linear pixel-space extrapolation of the last observed centroid to time t.
  std::array<double, 2> gate_center(double t) const;
};

struct AssociationConfig {
  double gate_radius = 96.0;  // px
  int max_misses = 3;
  int confirm_hits = 2;
};

enum class PredictionMode { none, linear, flight_model };

// hover guard: flight_model falls back to the last observed position when the
// estimated body speed drops below this fraction of s_min
inline constexpr double kHoverSpeedFrac = 0.5;

struct PredictorConfig {
  PredictionMode mode = PredictionMode::flight_model;
  double horizon = 0.4;  // s; must be >= 0.2 when mode != none
};

struct Assignment {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

struct TrackStore {
  std::vector<Track> tracks;
  int next_id = 0;
  long lost_events = 0;  // active->lost transitions
};

struct TrackUpdateStats {
  int spawned = 0;
  int matched = 0;
  int lost_events = 0;
};

// Greedy nearest-neighbour in pixel space against each track's gate center at
// time t; pairs beyond gate_radius never match. Distance is the smaller of
// the extrapolated-gate distance and the last-observed distance (tolerates
// wall bounces). Ties on distance break toward the lower track id.
// Terminated tracks never match.
Assignment associate(const std::vector<Track>& tracks,
                     const std::vector<Detection>& detections, double t,
                     const AssociationConfig& cfg);

// NCC of track.tmpl over a square window of search_radius around the track's
// gate center at gray.timestamp; parabolic subpixel peak refinement. Returns
// absent when the best score is below 0.5 or the track has no template.
// score_out (optional) receives the best integer-grid score.
std::optional<std::array<double, 2>> correlation_refine(const Track& track,
                                                        const GrayFrame& gray,
                                                        int search_radius,
                                                        double* score_out = nullptr);
// Score of the template at a given integer offset (exposed for tests).
double ncc_score(const GrayFrame& tmpl, const GrayFrame& gray, int x0, int y0);

// Applies one detection epoch: matched tracks append history (world position
// by stereo pairing with right_dets when possible, else the nominal plane),
// velocity re-estimated over the last <= 5 observed points; unmatched active
// tracks accumulate misses and drop to lost; unmatched detections spawn
// tentative tracks; tentative tracks confirm after confirm_hits hits or
// terminate on a miss.
TrackUpdateStats update_tracks(TrackStore& store, const Assignment& asg,
                               const std::vector<Detection>& left_dets,
                               const std::vector<Detection>& right_dets,
                               double timestamp, const AssociationConfig& cfg,
                               const StereoRig& rig, double z_nominal);

// Forward prediction from the last observed state. none -> last position;
// linear -> position + velocity*horizon; flight_model -> jitter-free rollout
// of step() seeded with heading = unit(velocity - wind). Estimated body speed
// below kHoverSpeedFrac * s_min is treated as hover (returns the last
// position): the chord-averaged estimate understates true airspeed, so the
// guard sits well below s_min to avoid swallowing genuine transits. Returns
// nullopt with fewer than 2 history points.
std::optional<Vec3> predict(const Track& track, const PredictorConfig& cfg,
                            const FlightParams& params, const Wind& wind);

// Same mechanics as flight_model predict with horizon = elapsed.
Vec3 dead_reckon(const Track& track, const FlightParams& params,
                 const Wind& wind, double elapsed);

}  // namespace mz
