#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "vtime.hpp"

namespace mz {

const char* detector_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::frame_diff: return "frame_diff";
    case DetectorKind::color: return "color";
    case DetectorKind::correlation_track: return "correlation_track";
    case DetectorKind::profiled: return "profiled";
  }
  return "?";
}

DetectorKind detector_from_name(const std::string& s) {
  if (s == "frame_diff") return DetectorKind::frame_diff;
  if (s == "color") return DetectorKind::color;
  if (s == "correlation_track") return DetectorKind::correlation_track;
  if (s == "profiled") return DetectorKind::profiled;
  throw ConfigError("pipeline.detector: unknown detector '" + s + "'");
}

const char* prediction_mode_name(PredictionMode m) {
  switch (m) {
    case PredictionMode::none: return "none";
    case PredictionMode::linear: return "linear";
    case PredictionMode::flight_model: return "flight_model";
  }
  return "?";
}

PredictionMode prediction_mode_from_name(const std::string& s) {
  if (s == "none") return PredictionMode::none;
  if (s == "linear") return PredictionMode::linear;
  if (s == "flight_model") return PredictionMode::flight_model;
  throw ConfigError("pipeline.predictor.mode: unknown mode '" + s + "'");
}

const char* scheduler_name(SchedulerKind k) {
  return k == SchedulerKind::lowest_id_first ? "lowest_id_first" : "nearest_first";
}

SchedulerKind scheduler_from_name(const std::string& s) {
  if (s == "lowest_id_first") return SchedulerKind::lowest_id_first;
  if (s == "nearest_first") return SchedulerKind::nearest_first;
  throw ConfigError("pipeline.scheduler: unknown scheduler '" + s + "'");
}

StereoRig ScenarioConfig::make_rig() const {
  StereoRig rig;
  const double h = rig_baseline / 2.0;
  rig.left = CameraModel::looking(Vec3{-h, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0}, intr);
  rig.right = CameraModel::looking(Vec3{h, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0}, intr);
  return rig;
}

RenderOptions ScenarioConfig::make_render() const {
  RenderOptions r = render;
  for (int ch = 0; ch < 3; ++ch) {
    r.background[ch] = std::uint8_t(background_gray);
    r.mosquito[ch] = std::uint8_t(mosquito_gray);
  }
  r.wind_velocity = wind.velocity;
  return r;
}

double PipelineConfig::effective_latency() const {
  if (latency_override >= 0.0) return latency_override;
  switch (detector) {
    case DetectorKind::frame_diff: return 0.1;
    case DetectorKind::color: return 0.3;
    case DetectorKind::correlation_track: return 0.15;
    case DetectorKind::profiled: return profile.latency;
  }
  return 0.1;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double_v(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

long parse_long_v(const std::string& s) {
  long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::uint64_t parse_u64_v(const std::string& s) {
  std::uint64_t v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("not an unsigned integer: '" + s + "'");
  return v;
}

bool parse_bool_v(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

struct Entry {
  const char* key;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, const std::string&)> set;
};

#define ENT_D(k, f)                                                     \
  {k, [](const SimConfig& c) { return format_double(c.f); },            \
   [](SimConfig& c, const std::string& v) { c.f = parse_double_v(v); }}
#define ENT_I(k, f)                                                     \
  {k, [](const SimConfig& c) { return std::to_string(c.f); },           \
   [](SimConfig& c, const std::string& v) { c.f = int(parse_long_v(v)); }}
#define ENT_B(k, f)                                                       \
  {k, [](const SimConfig& c) { return std::string(c.f ? "true" : "false"); }, \
   [](SimConfig& c, const std::string& v) { c.f = parse_bool_v(v); }}
#define ENT_U(k, f)                                                     \
  {k, [](const SimConfig& c) { return std::to_string(c.f); },           \
   [](SimConfig& c, const std::string& v) { c.f = parse_u64_v(v); }}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> reg = {
      ENT_D("box.min_x", scenario.box.min_corner.x),
      ENT_D("box.min_y", scenario.box.min_corner.y),
      ENT_D("box.min_z", scenario.box.min_corner.z),
      ENT_D("box.max_x", scenario.box.max_corner.x),
      ENT_D("box.max_y", scenario.box.max_corner.y),
      ENT_D("box.max_z", scenario.box.max_corner.z),
      ENT_I("scenario.mosquito_count", scenario.mosquito_count),
      ENT_D("scenario.body_radius", scenario.body_radius),
      ENT_D("flight.s_max", scenario.flight.s_max),
      ENT_D("flight.s_min", scenario.flight.s_min),
      ENT_D("flight.dt", scenario.flight.dt),
      ENT_D("flight.sigma_turn", scenario.flight.sigma_turn),
      ENT_D("flight.p_sharp", scenario.flight.p_sharp),
      ENT_D("flight.sharp_turn_lo", scenario.flight.sharp_turn_lo),
      ENT_D("flight.sharp_turn_hi", scenario.flight.sharp_turn_hi),
      ENT_D("attractant.source_x", scenario.attractant.source.x),
      ENT_D("attractant.source_y", scenario.attractant.source.y),
      ENT_D("attractant.source_z", scenario.attractant.source.z),
      ENT_D("attractant.strength", scenario.attractant.strength),
      ENT_D("attractant.length_scale", scenario.attractant.length_scale),
      ENT_D("attractant.threshold", scenario.attractant.threshold),
      ENT_D("attractant.saturation", scenario.attractant.saturation),
      ENT_D("attractant.pull", scenario.attractant.pull),
      ENT_D("wind.x", scenario.wind.velocity.x),
      ENT_D("wind.y", scenario.wind.velocity.y),
      ENT_D("wind.z", scenario.wind.velocity.z),
      ENT_D("rig.baseline", scenario.rig_baseline),
      ENT_D("rig.f_px", scenario.intr.f_px),
      ENT_I("rig.width", scenario.intr.width),
      ENT_I("rig.height", scenario.intr.height),
      ENT_D("rig.cx", scenario.intr.cx),
      ENT_D("rig.cy", scenario.intr.cy),
      ENT_I("render.background_gray", scenario.background_gray),
      ENT_I("render.mosquito_gray", scenario.mosquito_gray),
      ENT_D("render.noise_sigma", scenario.render.noise_sigma),
      ENT_B("render.motion_blur", scenario.render.motion_blur),
      ENT_D("render.exposure_s", scenario.render.exposure_s),
      ENT_B("render.textured_background", scenario.render.textured_background),
      ENT_U("render.texture_seed", scenario.render.texture_seed),
      {"pipeline.detector",
       [](const SimConfig& c) { return std::string(detector_name(c.pipeline.detector)); },
       [](SimConfig& c, const std::string& v) { c.pipeline.detector = detector_from_name(v); }},
      {"pipeline.predictor.mode",
       [](const SimConfig& c) {
         return std::string(prediction_mode_name(c.pipeline.predictor.mode));
       },
       [](SimConfig& c, const std::string& v) {
         c.pipeline.predictor.mode = prediction_mode_from_name(v);
       }},
      ENT_D("pipeline.predictor.horizon", pipeline.predictor.horizon),
      ENT_D("pipeline.latency_override", pipeline.latency_override),
      {"pipeline.scheduler",
       [](const SimConfig& c) { return std::string(scheduler_name(c.pipeline.scheduler)); },
       [](SimConfig& c, const std::string& v) { c.pipeline.scheduler = scheduler_from_name(v); }},
      ENT_D("pipeline.dwell", pipeline.dwell),
      ENT_D("pipeline.episode_duration", pipeline.episode_duration),
      ENT_D("pipeline.max_coast", pipeline.max_coast),
      ENT_D("assoc.gate_radius", pipeline.assoc.gate_radius),
      ENT_I("assoc.max_misses", pipeline.assoc.max_misses),
      ENT_I("assoc.confirm_hits", pipeline.assoc.confirm_hits),
      ENT_D("profile.latency", pipeline.profile.latency),
      ENT_D("profile.p_detect", pipeline.profile.p_detect),
      ENT_D("profile.sigma", pipeline.profile.centroid_noise_sigma),
      ENT_I("pipeline.threshold_value", pipeline.threshold_value),
      ENT_D("pipeline.color_v_center", pipeline.color_v_center),
      ENT_D("pipeline.color_v_tol", pipeline.color_v_tol),
      ENT_I("pipeline.search_radius", pipeline.search_radius),
      ENT_I("pipeline.template_radius", pipeline.template_radius),
      ENT_D("laser.power_w", pipeline.laser.power_w),
      ENT_D("laser.wavelength_nm", pipeline.laser.wavelength_nm),
      ENT_D("laser.spot_diameter", pipeline.laser.spot_diameter_at_nominal),
      ENT_D("laser.nominal_range", pipeline.laser.nominal_range),
      ENT_D("laser.area_growth", pipeline.laser.area_growth_across_box),
      ENT_D("laser.box_span", pipeline.laser.box_span),
      ENT_D("galvo.settle_time", pipeline.galvo.settle_time),
      ENT_D("galvo.max_slew", pipeline.galvo.max_slew),
      ENT_D("galvo.field_limit", pipeline.galvo.field_limit),
      ENT_D("kill.rate_k", pipeline.kill_rate_k),
  };
  return reg;
}

#undef ENT_D
#undef ENT_I
#undef ENT_B
#undef ENT_U

const Entry* find_entry(const std::string& key) {
  for (const Entry& e : registry())
    if (key == e.key) return &e;
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check(bool ok, const char* field, const char* reason) {
  if (!ok) throw ConfigError(std::string(field) + ": " + reason);
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Entry& e : registry()) out.push_back(e.key);
  return out;
}

void set_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  const Entry* e = find_entry(key);
  if (!e) throw ConfigError("unknown key '" + key + "'");
  e->set(cfg, value);
}

std::string get_key(const SimConfig& cfg, const std::string& key) {
  const Entry* e = find_entry(key);
  if (!e) throw ConfigError("unknown key '" + key + "'");
  return e->get(cfg);
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_key(cfg, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_string(const SimConfig& cfg) {
  std::string out = "# simulator configuration (key = value, '#' comments)\n";
  for (const Entry& e : registry()) {
    out += e.key;
    out += " = ";
    out += e.get(cfg);
    out += "\n";
  }
  return out;
}

void save_config(const SimConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write config file: " + path);
  out << config_to_string(cfg);
}

void validate(const SimConfig& cfg) {
  const ScenarioConfig& s = cfg.scenario;
  const PipelineConfig& p = cfg.pipeline;

  check(s.box.min_corner.x < s.box.max_corner.x, "box.min_x", "must be < box.max_x");
  check(s.box.min_corner.y < s.box.max_corner.y, "box.min_y", "must be < box.max_y");
  check(s.box.min_corner.z < s.box.max_corner.z, "box.min_z", "must be < box.max_z");
  check(s.mosquito_count >= 0, "scenario.mosquito_count", "must be >= 0");
  check(s.body_radius >= 0.5 && s.body_radius <= 2.5, "scenario.body_radius",
        "must be in [0.5, 2.5] mm");
  check(s.flight.s_min > 0.0, "flight.s_min", "must be > 0");
  check(s.flight.s_max >= s.flight.s_min, "flight.s_max", "must be >= flight.s_min");
  check(s.flight.dt > 0.0, "flight.dt", "must be > 0");
  const Ticks dt_ticks = to_ticks(s.flight.dt);
  check(dt_ticks >= 1 && kFramePeriodTicks % dt_ticks == 0, "flight.dt",
        "must divide the 1/30 s frame period on the 1/720000 s tick grid");
  check(s.flight.sigma_turn >= 0.0, "flight.sigma_turn", "must be >= 0");
  check(s.flight.p_sharp >= 0.0 && s.flight.p_sharp <= 1.0, "flight.p_sharp",
        "must be in [0, 1]");
  check(s.flight.sharp_turn_lo <= s.flight.sharp_turn_hi, "flight.sharp_turn_lo",
        "must be <= flight.sharp_turn_hi");
  check(s.attractant.threshold >= 0.0, "attractant.threshold", "must be >= 0");
  check(s.attractant.saturation > s.attractant.threshold, "attractant.saturation",
        "must exceed attractant.threshold");
  check(s.attractant.strength >= 0.0, "attractant.strength", "must be >= 0");
  check(s.attractant.length_scale > 0.0, "attractant.length_scale", "must be > 0");
  check(s.attractant.pull >= 0.0 && s.attractant.pull <= 1.0, "attractant.pull",
        "must be in [0, 1]");
  check(s.wind.velocity.finite(), "wind.x", "must be finite");
  check(s.rig_baseline > 0.0, "rig.baseline", "must be > 0");
  check(s.intr.f_px > 0.0, "rig.f_px", "must be > 0");
  check(s.intr.width >= 16 && s.intr.height >= 16, "rig.width",
        "frame must be at least 16x16");
  check(s.background_gray >= 0 && s.background_gray <= 255,
        "render.background_gray", "must be in [0, 255]");
  check(s.mosquito_gray >= 0 && s.mosquito_gray <= 255, "render.mosquito_gray",
        "must be in [0, 255]");
  check(s.render.noise_sigma >= 0.0, "render.noise_sigma", "must be >= 0");
  check(s.render.exposure_s >= 0.0 &&
            s.render.exposure_s <= 1.0 / double(kFrameRate),
        "render.exposure_s", "must be in [0, frame period]");

  check(p.dwell > 0.0, "pipeline.dwell", "must be > 0");
  check(p.episode_duration > 0.0, "pipeline.episode_duration", "must be > 0");
  check(p.max_coast > 0.0, "pipeline.max_coast", "must be > 0");
  if (p.predictor.mode != PredictionMode::none)
    check(p.predictor.horizon >= 0.2, "pipeline.predictor.horizon",
          "must be >= 0.2 s when pipeline.predictor.mode != none");
  check(p.assoc.gate_radius > 0.0, "assoc.gate_radius", "must be > 0");
  check(p.assoc.max_misses >= 1, "assoc.max_misses", "must be >= 1");
  check(p.assoc.confirm_hits >= 1, "assoc.confirm_hits", "must be >= 1");
  check(p.profile.latency >= 0.0, "profile.latency", "must be >= 0");
  check(p.profile.p_detect >= 0.0 && p.profile.p_detect <= 1.0,
        "profile.p_detect", "must be in [0, 1]");
  check(p.profile.centroid_noise_sigma >= 0.0, "profile.sigma", "must be >= 0");
  check(p.threshold_value >= 0 && p.threshold_value <= 255,
        "pipeline.threshold_value", "must be in [0, 255]");
  check(p.color_v_tol >= 0.0, "pipeline.color_v_tol", "must be >= 0");
  check(p.search_radius >= 1, "pipeline.search_radius", "must be >= 1");
  check(p.template_radius >= 2, "pipeline.template_radius", "must be >= 2");
  check(p.laser.spot_diameter_at_nominal > 0.0, "laser.spot_diameter",
        "must be > 0");
  check(p.laser.nominal_range > 0.0, "laser.nominal_range", "must be > 0");
  check(p.laser.box_span > 0.0, "laser.box_span", "must be > 0");
  check(p.laser.area_growth_across_box > -1.0, "laser.area_growth",
        "must exceed -1");
  check(p.galvo.settle_time > 0.0, "galvo.settle_time", "must be > 0");
  check(p.galvo.max_slew > 0.0, "galvo.max_slew", "must be > 0");
  check(p.galvo.field_limit > 0.0 && p.galvo.field_limit <= 1.5,
        "galvo.field_limit", "must be in (0, 1.5] rad");
  check(p.kill_rate_k >= 0.0, "kill.rate_k", "must be >= 0 (0 = calibrate)");
}

}  // namespace mz
