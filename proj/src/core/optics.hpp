#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "scene_flight.hpp"
#include "vec3.hpp"

namespace mz {

struct CameraIntrinsics {
  int width = 640;
  int height = 480;
  double f_px = 600.0;
  double cx = 320.0;
  double cy = 240.0;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // along the optical axis, same units as world coords
};

// Pinhole camera. Image u grows along `right`, v along `down`.
struct CameraModel {
  CameraIntrinsics intr;
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 right{1.0, 0.0, 0.0};
  Vec3 down{0.0, 1.0, 0.0};
  Vec3 forward{0.0, 0.0, 1.0};

  // Builds an orthonormal basis looking along `axis`. `down_hint` picks the
  // image-vertical direction (world +y by default, i.e. v grows with y).
  static CameraModel looking(const Vec3& pos, const Vec3& axis,
                             const CameraIntrinsics& intr,
                             const Vec3& down_hint = Vec3{0.0, 1.0, 0.0});

  // nullopt when the point is at or behind the camera plane. Points outside
  // the image bounds still project; use in_frame() to test containment.
  std::optional<Projection> project(const Vec3& p) const;
  Vec3 unproject(double u, double v, double depth) const;
  bool in_frame(double u, double v, double margin = 0.0) const;
};

struct StereoRig {
  CameraModel left;
  CameraModel right;

  static StereoRig standard();  // parallel axes, 60 mm baseline, +z boresight
  double baseline() const { return distance(left.position, right.position); }
  // Depth from horizontal disparity d = u_left - u_right; nullopt for d <= 0.
  std::optional<double> depth_from_disparity(double disparity) const;
  // Full 3-D point from a rectified correspondence (row taken from the left).
  std::optional<Vec3> triangulate(double u_left, double v_left,
                                  double u_right) const;
};

struct Frame {
  int width = 0;
  int height = 0;
  double timestamp = 0.0;  // seconds on the virtual clock; stamped by the caller
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Frame() = default;
  Frame(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0) {}
  std::uint8_t* px(int x, int y) { return &rgb[(std::size_t(y) * width + x) * 3]; }
  const std::uint8_t* px(int x, int y) const {
    return &rgb[(std::size_t(y) * width + x) * 3];
  }
};

struct RenderOptions {
  std::uint8_t background[3] = {200, 200, 200};
  std::uint8_t mosquito[3] = {40, 40, 40};
  bool textured_background = false;
  std::uint64_t texture_seed = 7;
  double noise_sigma = 2.0;      // additive Gaussian, per channel
  bool motion_blur = true;
  double exposure_s = 0.004;
  Vec3 wind_velocity{0.0, 0.0, 0.0};  // adds to body motion for blur smear
};

// Deterministic for a given (options, seed, frame_index, camera_id): the
// noise stream is derived from those alone, so frames can be rendered lazily
// and out of order without changing their content.
Frame render_frame(const CameraModel& cam, const std::vector<MosquitoState>& bodies,
                   const RenderOptions& opt, std::uint64_t noise_seed_base,
                   std::int64_t frame_index, int camera_id);

// Standard normal quantile (Acklam's rational approximation), exposed for
// tests of the table-driven noise path.
double inverse_normal_cdf(double p);

}  // namespace mz
