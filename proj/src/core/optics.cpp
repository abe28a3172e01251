#include "optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rng.hpp"

namespace mz {

CameraModel CameraModel::looking(const Vec3& pos, const Vec3& axis,
                                 const CameraIntrinsics& intr,
                                 const Vec3& down_hint) {
  CameraModel cam;
  cam.intr = intr;
  cam.position = pos;
  cam.forward = axis.normalized();
  Vec3 r = cross(down_hint, cam.forward);
  if (r.norm2() < 1e-18) {  // axis parallel to hint; pick any perpendicular
    r = cross(Vec3{1.0, 0.0, 0.0}, cam.forward);
    if (r.norm2() < 1e-18) r = cross(Vec3{0.0, 1.0, 0.0}, cam.forward);
  }
  cam.right = r.normalized();
  cam.down = cross(cam.forward, cam.right);
  return cam;
}

std::optional<Projection> CameraModel::project(const Vec3& p) const {
  const Vec3 d = p - position;
  const double z = dot(d, forward);
  if (!(z > 1e-9)) return std::nullopt;
  Projection pr;
  pr.depth = z;
  pr.u = intr.f_px * dot(d, right) / z + intr.cx;
  pr.v = intr.f_px * dot(d, down) / z + intr.cy;
  return pr;
}

Vec3 CameraModel::unproject(double u, double v, double depth) const {
  return position + depth * forward +
         ((u - intr.cx) * depth / intr.f_px) * right +
         ((v - intr.cy) * depth / intr.f_px) * down;
}

bool CameraModel::in_frame(double u, double v, double margin) const {
  return u >= -margin && u <= intr.width - 1 + margin && v >= -margin &&
         v <= intr.height - 1 + margin;
}

StereoRig StereoRig::standard() {
  StereoRig rig;
  CameraIntrinsics intr;
  rig.left = CameraModel::looking(Vec3{-30.0, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0}, intr);
  rig.right = CameraModel::looking(Vec3{30.0, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0}, intr);
  return rig;
}

std::optional<double> StereoRig::depth_from_disparity(double disparity) const {
  if (!(disparity > 1e-9)) return std::nullopt;
  return left.intr.f_px * baseline() / disparity;
}

std::optional<Vec3> StereoRig::triangulate(double u_left, double v_left,
                                           double u_right) const {
  const auto z = depth_from_disparity(u_left - u_right);
  if (!z) return std::nullopt;
  return left.unproject(u_left, v_left, *z);
}

double inverse_normal_cdf(double p) {
  // Acklam's rational approximation, |rel err| < 1.2e-9 on (0, 1).
  if (p <= 0.0) return -8.0;
  if (p >= 1.0) return 8.0;
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

namespace {

// 4096-level quantised standard normal; plenty for 8-bit pixels and ~20x
// cheaper than Box-Muller per sample.
const std::array<double, 4096>& normal_table() {
  static const std::array<double, 4096> tbl = [] {
    std::array<double, 4096> t{};
    for (int i = 0; i < 4096; ++i)
      t[std::size_t(i)] = inverse_normal_cdf((i + 0.5) / 4096.0);
    return t;
  }();
  return tbl;
}

double lattice_val(std::uint64_t seed, std::int64_t gx, std::int64_t gy) {
  std::uint64_t h = seed ^ (std::uint64_t(gx) * 0x9E3779B97F4A7C15ull) ^
                    (std::uint64_t(gy) * 0xBF58476D1CE4E5B9ull);
  return double(splitmix64(h) >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

void fill_background(Frame& f, const RenderOptions& opt) {
  if (!opt.textured_background) {
    for (std::size_t i = 0; i < f.rgb.size(); i += 3) {
      f.rgb[i] = opt.background[0];
      f.rgb[i + 1] = opt.background[1];
      f.rgb[i + 2] = opt.background[2];
    }
    return;
  }
  constexpr int kCell = 16;
  for (int y = 0; y < f.height; ++y) {
    const std::int64_t gy = y / kCell;
    const double ty = smoothstep(double(y % kCell) / kCell);
    for (int x = 0; x < f.width; ++x) {
      const std::int64_t gx = x / kCell;
      const double tx = smoothstep(double(x % kCell) / kCell);
      const double v00 = lattice_val(opt.texture_seed, gx, gy);
      const double v10 = lattice_val(opt.texture_seed, gx + 1, gy);
      const double v01 = lattice_val(opt.texture_seed, gx, gy + 1);
      const double v11 = lattice_val(opt.texture_seed, gx + 1, gy + 1);
      const double n =
          (v00 * (1.0 - tx) + v10 * tx) * (1.0 - ty) +
          (v01 * (1.0 - tx) + v11 * tx) * ty;
      std::uint8_t* p = f.px(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        const double val = double(opt.background[ch]) + (n - 0.5) * 90.0;
        p[ch] = std::uint8_t(std::clamp(std::lround(val), 0l, 255l));
      }
    }
  }
}

double dist_to_segment(double px, double py, double ax, double ay, double bx,
                       double by) {
  const double abx = bx - ax, aby = by - ay;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 1e-18) {
    t = std::clamp(((px - ax) * abx + (py - ay) * aby) / len2, 0.0, 1.0);
  }
  const double dx = px - (ax + t * abx), dy = py - (ay + t * aby);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Frame render_frame(const CameraModel& cam, const std::vector<MosquitoState>& bodies,
                   const RenderOptions& opt, std::uint64_t noise_seed_base,
                   std::int64_t frame_index, int camera_id) {
  Frame f(cam.intr.width, cam.intr.height);
  fill_background(f, opt);

  for (const MosquitoState& m : bodies) {
    if (!m.alive) continue;
    const auto cur = cam.project(m.position);
    if (!cur) continue;
    const double r_px = cam.intr.f_px * m.body_radius / cur->depth;

    double au = cur->u, av = cur->v;   // trailing end of the streak
    double bu = cur->u, bv = cur->v;
    double dim = 1.0;
    if (opt.motion_blur && opt.exposure_s > 0.0) {
      const Vec3 vel = m.speed * m.heading + opt.wind_velocity;
      const auto prev = cam.project(m.position - opt.exposure_s * vel);
      if (prev) {
        au = prev->u;
        av = prev->v;
        const double len = std::hypot(bu - au, bv - av);
        dim = 2.0 * r_px / (2.0 * r_px + len);
      }
    }

    const int x0 = std::max(0, int(std::floor(std::min(au, bu) - r_px - 1.0)));
    const int x1 = std::min(f.width - 1, int(std::ceil(std::max(au, bu) + r_px + 1.0)));
    const int y0 = std::max(0, int(std::floor(std::min(av, bv) - r_px - 1.0)));
    const int y1 = std::min(f.height - 1, int(std::ceil(std::max(av, bv) + r_px + 1.0)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dist = dist_to_segment(double(x), double(y), au, av, bu, bv);
        const double cov = std::clamp(r_px + 0.5 - dist, 0.0, 1.0);
        if (cov <= 0.0) continue;
        const double a = cov * dim;
        std::uint8_t* p = f.px(x, y);
        for (int ch = 0; ch < 3; ++ch) {
          const double val = double(p[ch]) + (double(opt.mosquito[ch]) - double(p[ch])) * a;
          p[ch] = std::uint8_t(std::clamp(std::lround(val), 0l, 255l));
        }
      }
    }
  }

  if (opt.noise_sigma > 0.0) {
    const auto& tbl = normal_table();
    std::array<int, 4096> off;
    for (std::size_t i = 0; i < off.size(); ++i)
      off[i] = int(std::lround(opt.noise_sigma * tbl[i]));
    Rng rng(derive_seed(derive_seed(noise_seed_base, std::uint64_t(frame_index)),
                        0xCA000000ull + std::uint64_t(camera_id)));
    // one draw per pixel, shared by the three channels: sensor noise is
    // modeled as luminance noise, and the fill stays at one draw per pixel
    std::uint8_t* p = f.rgb.data();
    const std::size_t n_px = f.rgb.size() / 3;
    for (std::size_t i = 0; i < n_px; ++i, p += 3) {
      const int d = off[std::size_t(rng.next_u64() >> 52)];
      for (int ch = 0; ch < 3; ++ch) {
        const int v = int(p[ch]) + d;
        p[ch] = std::uint8_t(v < 0 ? 0 : (v > 255 ? 255 : v));
      }
    }
  }
  return f;
}

}  // namespace mz
