#pragma once
#include <cstdint>
#include <string>

#include "config.hpp"
#include "engine.hpp"
#include "vision.hpp"

namespace mz {

void write_ppm(const Frame& f, const std::string& path);
void write_pgm(const GrayFrame& g, const std::string& path);
void write_text(const std::string& path, const std::string& content);

// Renders the first `frames` frames of an episode's flight (no pipeline in
// the loop) into out_dir: frame_left_NNNNNN.ppm / frame_right_NNNNNN.ppm
// (1-based indices), gray_left / diff_left / mask_left intermediates, and
// centroids.csv with the truth projections for both cameras.
void render_dump(const SimConfig& cfg, std::uint64_t seed, int frames,
                 const std::string& out_dir);

// episode,track_id,timestamp_s,u_px,v_px,x_mm,y_mm,z_mm,lifecycle
std::string tracks_csv(const EpisodeResult& r, int episode = 0);
// episode,time_s,aim_x_mm,aim_y_mm,aim_z_mm,dwell_s,target_id,
// overlap_integral,killed
std::string fires_csv(const EpisodeResult& r, int episode = 0);

}  // namespace mz
