#include "vision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mz {

void rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b, double& h,
                double& s, double& v) {
  const double rf = r / 255.0, gf = g / 255.0, bf = b / 255.0;
  const double mx = std::max({rf, gf, bf});
  const double mn = std::min({rf, gf, bf});
  const double delta = mx - mn;
  v = mx;
  s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) {
    h = 0.0;
    return;
  }
  if (mx == rf) {
    h = 60.0 * ((gf - bf) / delta);
  } else if (mx == gf) {
    h = 60.0 * ((bf - rf) / delta + 2.0);
  } else {
    h = 60.0 * ((rf - gf) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
}

GrayFrame to_gray(const Frame& frame) {
  GrayFrame g(frame.width, frame.height);
  g.timestamp = frame.timestamp;
  const std::size_t n = std::size_t(frame.width) * frame.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = &frame.rgb[i * 3];
    // integer form of the 0.299/0.587/0.114 weights, rounded to nearest
    g.pix[i] = std::uint8_t((299u * p[0] + 587u * p[1] + 114u * p[2] + 500u) / 1000u);
  }
  return g;
}

GrayFrame threshold(const GrayFrame& gray, const ThresholdParams& params) {
  GrayFrame out(gray.width, gray.height);
  out.timestamp = gray.timestamp;
  const std::uint8_t t = std::uint8_t(std::clamp(params.value, 0, 255));
  const std::uint8_t mx = std::uint8_t(std::clamp(params.max_value, 0, 255));
  for (std::size_t i = 0; i < gray.pix.size(); ++i) {
    const std::uint8_t p = gray.pix[i];
    switch (params.mode) {
      case ThresholdMode::binary: out.pix[i] = p > t ? mx : 0; break;
      case ThresholdMode::binary_inverse: out.pix[i] = p > t ? 0 : mx; break;
      case ThresholdMode::truncate: out.pix[i] = std::min(p, t); break;
      case ThresholdMode::to_zero: out.pix[i] = p > t ? p : 0; break;
      case ThresholdMode::to_zero_inverse: out.pix[i] = p > t ? 0 : p; break;
    }
  }
  return out;
}

GrayFrame frame_difference(const GrayFrame& prev, const GrayFrame& curr,
                           const ThresholdParams& params) {
  if (prev.width != curr.width || prev.height != curr.height)
    throw std::invalid_argument("frame_difference: size mismatch");
  GrayFrame diff(curr.width, curr.height);
  diff.timestamp = curr.timestamp;
  for (std::size_t i = 0; i < diff.pix.size(); ++i) {
    const int d = int(curr.pix[i]) - int(prev.pix[i]);
    diff.pix[i] = std::uint8_t(d < 0 ? -d : d);
  }
  ThresholdParams bin = params;
  bin.mode = ThresholdMode::binary;
  return threshold(diff, bin);
}

GrayFrame color_mask(const Frame& frame, const ColorMaskParams& params) {
  GrayFrame out(frame.width, frame.height);
  out.timestamp = frame.timestamp;
  const std::size_t n = std::size_t(frame.width) * frame.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = &frame.rgb[i * 3];
    double hsv[3];
    rgb_to_hsv(p[0], p[1], p[2], hsv[0], hsv[1], hsv[2]);
    double dh = std::fabs(hsv[0] - params.center[0]);
    if (dh > 180.0) dh = 360.0 - dh;  // hue is circular
    const bool pass = dh <= params.tol[0] &&
                      std::fabs(hsv[1] - params.center[1]) <= params.tol[1] &&
                      std::fabs(hsv[2] - params.center[2]) <= params.tol[2];
    out.pix[i] = pass ? 255 : 0;
  }
  return out;
}

namespace {

int uf_find(std::vector<int>& parent, int x) {
  while (parent[std::size_t(x)] != x) {
    parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    x = parent[std::size_t(x)];
  }
  return x;
}

void uf_union(std::vector<int>& parent, int a, int b) {
  a = uf_find(parent, a);
  b = uf_find(parent, b);
  if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
}

}  // namespace

std::vector<Blob> connected_components(const GrayFrame& binary) {
  const int w = binary.width, h = binary.height;
  std::vector<int> label(std::size_t(w) * h, 0);
  std::vector<int> parent(1, 0);  // parent[0] unused (background)
  auto lab = [&](int x, int y) -> int& { return label[std::size_t(y) * w + x]; };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (binary.at(x, y) == 0) continue;
      int best = 0;
      const int nx[4] = {x - 1, x - 1, x, x + 1};
      const int ny[4] = {y, y - 1, y - 1, y - 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || nx[k] >= w || ny[k] < 0) continue;
        const int l = lab(nx[k], ny[k]);
        if (l == 0) continue;
        if (best == 0) {
          best = l;
        } else {
          uf_union(parent, best, l);
          best = std::min(best, uf_find(parent, l));
        }
      }
      if (best == 0) {
        best = int(parent.size());
        parent.push_back(best);
      }
      lab(x, y) = best;
    }
  }

  std::vector<int> compact(parent.size(), -1);
  std::vector<Blob> blobs;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int l = lab(x, y);
      if (l == 0) continue;
      l = uf_find(parent, l);
      int& id = compact[std::size_t(l)];
      if (id < 0) {
        id = int(blobs.size());
        Blob b;
        b.min_x = b.max_x = x;
        b.min_y = b.max_y = y;
        blobs.push_back(b);
      }
      Blob& b = blobs[std::size_t(id)];
      b.area += 1;
      b.centroid_u += x;
      b.centroid_v += y;
      b.min_x = std::min(b.min_x, x);
      b.max_x = std::max(b.max_x, x);
      b.min_y = std::min(b.min_y, y);
      b.max_y = std::max(b.max_y, y);
    }
  }
  for (Blob& b : blobs) {
    b.centroid_u /= double(b.area);
    b.centroid_v /= double(b.area);
  }
  return blobs;
}

std::vector<Detection> filter_blobs(const std::vector<Blob>& blobs,
                                    const CameraModel& camera, double z_nominal,
                                    double timestamp, double d_min_mm,
                                    double d_max_mm) {
  std::vector<Detection> out;
  const double mm_per_px = z_nominal / camera.intr.f_px;
  for (const Blob& b : blobs) {
    const double d_mm = std::sqrt(double(b.area)) * mm_per_px;
    if (!(d_mm > d_min_mm && d_mm < d_max_mm)) continue;
    Detection d;
    d.u = b.centroid_u;
    d.v = b.centroid_v;
    d.bbox_x = b.min_x;
    d.bbox_y = b.min_y;
    d.bbox_w = b.max_x - b.min_x + 1;
    d.bbox_h = b.max_y - b.min_y + 1;
    d.area_px = b.area;
    d.timestamp = timestamp;
    d.score = 1.0;
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> profiled_detect(const std::vector<MosquitoState>& truth,
                                       const CameraModel& camera,
                                       const DetectorProfile& profile, Rng& rng) {
  std::vector<Detection> out;
  for (const MosquitoState& m : truth) {
    if (!m.alive) continue;
    const auto pr = camera.project(m.position);
    if (!pr || !camera.in_frame(pr->u, pr->v)) continue;
    if (profile.p_detect < 1.0 && !rng.bernoulli(profile.p_detect)) continue;
    Detection d;
    d.u = pr->u;
    d.v = pr->v;
    if (profile.centroid_noise_sigma > 0.0) {
      d.u += rng.normal(0.0, profile.centroid_noise_sigma);
      d.v += rng.normal(0.0, profile.centroid_noise_sigma);
    }
    const double r_px = camera.intr.f_px * m.body_radius / pr->depth;
    d.area_px = std::max(1l, std::lround(3.14159265358979 * r_px * r_px));
    const int half = std::max(2, int(std::ceil(r_px)) + 1);
    d.bbox_x = int(std::floor(d.u)) - half;
    d.bbox_y = int(std::floor(d.v)) - half;
    d.bbox_w = 2 * half + 1;
    d.bbox_h = 2 * half + 1;
    d.score = 1.0;
    out.push_back(d);
  }
  return out;
}

}  // namespace mz
