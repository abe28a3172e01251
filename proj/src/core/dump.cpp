#include "dump.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vtime.hpp"

namespace mz {

namespace {

void open_out(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write file: " + path);
}

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_ppm(const Frame& f, const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << "P6\n" << f.width << " " << f.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(f.rgb.data()),
            std::streamsize(f.rgb.size()));
  if (!out) throw RuntimeError("short write: " + path);
}

void write_pgm(const GrayFrame& g, const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << "P5\n" << g.width << " " << g.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(g.pix.data()),
            std::streamsize(g.pix.size()));
  if (!out) throw RuntimeError("short write: " + path);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out;
  open_out(out, path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw RuntimeError("short write: " + path);
}

void render_dump(const SimConfig& cfg, std::uint64_t seed, int frames,
                 const std::string& out_dir) {
  validate(cfg);
  if (frames < 1) throw ConfigError("render: frames must be >= 1");
  std::filesystem::create_directories(out_dir);

  const StereoRig rig = cfg.scenario.make_rig();
  const RenderOptions ropts = cfg.scenario.make_render();
  const std::uint64_t noise_base = derive_seed(seed, kSeedTagRenderNoise);
  const Ticks dt_ticks = to_ticks(cfg.scenario.flight.dt);
  const int steps_per_frame = int(kFramePeriodTicks / dt_ticks);
  FlightParams fp = cfg.scenario.flight;
  fp.dt = to_seconds(dt_ticks);
  FlightScene scene(cfg.scenario.box, cfg.scenario.attractant, fp,
                    cfg.scenario.wind, cfg.scenario.mosquito_count,
                    cfg.scenario.body_radius, derive_seed(seed, kSeedTagScene));

  ThresholdParams tp;
  tp.value = cfg.pipeline.threshold_value;
  ColorMaskParams cmp;
  cmp.center[2] = cfg.pipeline.color_v_center;
  cmp.tol[2] = cfg.pipeline.color_v_tol;

  std::string cent = "frame,camera,mosquito_id,u_px,v_px,depth_mm,in_frame\n";
  GrayFrame prev_gray;
  char name[64];
  const std::string dir = out_dir + "/";
  for (int k = 0; k < frames; ++k) {
    if (k > 0) scene.advance(steps_per_frame);
    const double t = to_seconds(Ticks(k) * kFramePeriodTicks);

    Frame left = render_frame(rig.left, scene.states(), ropts, noise_base, k, 0);
    Frame right =
        render_frame(rig.right, scene.states(), ropts, noise_base, k, 1);
    left.timestamp = right.timestamp = t;

    std::snprintf(name, sizeof name, "frame_left_%06d.ppm", k + 1);
    write_ppm(left, dir + name);
    std::snprintf(name, sizeof name, "frame_right_%06d.ppm", k + 1);
    write_ppm(right, dir + name);

    GrayFrame gray = to_gray(left);
    gray.timestamp = t;
    std::snprintf(name, sizeof name, "gray_left_%06d.pgm", k + 1);
    write_pgm(gray, dir + name);
    if (k > 0) {
      std::snprintf(name, sizeof name, "diff_left_%06d.pgm", k + 1);
      write_pgm(frame_difference(prev_gray, gray, tp), dir + name);
    }
    std::snprintf(name, sizeof name, "mask_left_%06d.pgm", k + 1);
    write_pgm(color_mask(left, cmp), dir + name);
    prev_gray = std::move(gray);

    for (int cam_id = 0; cam_id < 2; ++cam_id) {
      const CameraModel& cam = cam_id ? rig.right : rig.left;
      const char* cam_name = cam_id ? "right" : "left";
      for (const MosquitoState& m : scene.states()) {
        if (!m.alive) continue;
        const auto pr = cam.project(m.position);
        if (!pr) continue;
        cent += std::to_string(k + 1);
        cent += ',';
        cent += cam_name;
        cent += ',';
        cent += std::to_string(m.id);
        cent += ',';
        cent += fmt6(pr->u);
        cent += ',';
        cent += fmt6(pr->v);
        cent += ',';
        cent += fmt6(pr->depth);
        cent += ',';
        cent += cam.in_frame(pr->u, pr->v) ? '1' : '0';
        cent += '\n';
      }
    }
  }
  write_text(dir + "centroids.csv", cent);
}

std::string tracks_csv(const EpisodeResult& r, int episode) {
  std::string out =
      "episode,track_id,timestamp_s,u_px,v_px,x_mm,y_mm,z_mm,lifecycle\n";
  for (const TrackLogRow& row : r.track_log) {
    out += std::to_string(episode);
    out += ',';
    out += std::to_string(row.track_id);
    out += ',';
    out += fmt6(row.timestamp);
    out += ',';
    out += fmt6(row.u);
    out += ',';
    out += fmt6(row.v);
    out += ',';
    out += fmt6(row.world.x);
    out += ',';
    out += fmt6(row.world.y);
    out += ',';
    out += fmt6(row.world.z);
    out += ',';
    out += lifecycle_name(row.lifecycle);
    out += '\n';
  }
  return out;
}

std::string fires_csv(const EpisodeResult& r, int episode) {
  std::string out =
      "episode,time_s,aim_x_mm,aim_y_mm,aim_z_mm,dwell_s,target_id,"
      "overlap_integral,killed\n";
  for (const FireRecord& f : r.fire_log) {
    out += std::to_string(episode);
    out += ',';
    out += fmt6(f.time_s);
    out += ',';
    out += fmt6(f.aim.x);
    out += ',';
    out += fmt6(f.aim.y);
    out += ',';
    out += fmt6(f.aim.z);
    out += ',';
    out += fmt6(f.dwell_s);
    out += ',';
    out += std::to_string(f.target_track_id);
    out += ',';
    out += fmt6(f.overlap_integral);
    out += ',';
    out += f.killed ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace mz
