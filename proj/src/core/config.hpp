#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "actuation.hpp"
#include "errors.hpp"
#include "optics.hpp"
#include "scene_flight.hpp"
#include "tracking.hpp"
#include "vision.hpp"

namespace mz {

enum class DetectorKind { frame_diff, color, correlation_track, profiled };
enum class SchedulerKind { lowest_id_first, nearest_first };

const char* detector_name(DetectorKind k);
DetectorKind detector_from_name(const std::string& s);  // throws ConfigError
const char* prediction_mode_name(PredictionMode m);
PredictionMode prediction_mode_from_name(const std::string& s);
const char* scheduler_name(SchedulerKind k);
SchedulerKind scheduler_from_name(const std::string& s);

struct ScenarioConfig {
  BoxRegion box;
  int mosquito_count = 3;
  double body_radius = 1.0;
  FlightParams flight;
  AttractantField attractant;
  Wind wind;
  double rig_baseline = 60.0;  // mm between camera centers
  CameraIntrinsics intr;
  int background_gray = 200;
  int mosquito_gray = 40;
  RenderOptions render;  // colors and wind are overwritten by make_render()

  StereoRig make_rig() const;
  RenderOptions make_render() const;
};

struct PipelineConfig {
  DetectorKind detector = DetectorKind::correlation_track;
  PredictorConfig predictor;
  double latency_override = -1.0;  // < 0: use the per-method default
  SchedulerKind scheduler = SchedulerKind::lowest_id_first;
  double dwell = 0.5;
  double episode_duration = 10.0;
  double max_coast = 1.0;  // s a track may coast unobserved before termination
  AssociationConfig assoc;
  DetectorProfile profile;  // the stand-in detector
  int threshold_value = 15;
  double color_v_center = 0.22;  // V-channel box of the color mask
  double color_v_tol = 0.18;
  int search_radius = 16;
  int template_radius = 5;
  LaserSpec laser;
  GalvoLimits galvo;
  double kill_rate_k = 0.0;  // 0: calibrate from the laser spec + body radius

  // Table-1 defaults: frame_diff 0.1 s, color 0.3 s, correlation_track
  // 0.15 s, profiled = profile.latency; latency_override wins when >= 0.
  double effective_latency() const;
};

struct SimConfig {
  ScenarioConfig scenario;
  PipelineConfig pipeline;
};

// Flat `key = value` text, '#' comments. Unknown keys and malformed lines are
// reported with their line number; invariant violations with the field path.
std::vector<std::string> config_keys();
void set_key(SimConfig& cfg, const std::string& key, const std::string& value);
std::string get_key(const SimConfig& cfg, const std::string& key);
SimConfig parse_config_text(const std::string& text);  // parses + validates
SimConfig load_config(const std::string& path);
std::string config_to_string(const SimConfig& cfg);
void save_config(const SimConfig& cfg, const std::string& path);
void validate(const SimConfig& cfg);  // throws ConfigError

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace mz
