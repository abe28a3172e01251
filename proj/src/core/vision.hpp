#pragma once
#include <cstdint>
#include <vector>

#include "optics.hpp"
#include "rng.hpp"
#include "scene_flight.hpp"

namespace mz {

struct GrayFrame {
  int width = 0;
  int height = 0;
  double timestamp = 0.0;
  std::vector<std::uint8_t> pix;

  GrayFrame() = default;
  GrayFrame(int w, int h) : width(w), height(h), pix(std::size_t(w) * h, 0) {}
  std::uint8_t& at(int x, int y) { return pix[std::size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return pix[std::size_t(y) * width + x]; }
};

enum class ThresholdMode { binary, binary_inverse, truncate, to_zero, to_zero_inverse };

struct ThresholdParams {
  int value = 15;
  int max_value = 255;
  ThresholdMode mode = ThresholdMode::binary;
};

struct Blob {
  long area = 0;               // px
  double centroid_u = 0.0;     // mean of member pixel coords
  double centroid_v = 0.0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

struct Detection {
  double u = 0.0, v = 0.0;     // subpixel centroid
  int bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;
  long area_px = 0;
  double timestamp = 0.0;
  double score = 1.0;
};

// Stand-in for detectors we model by measured latency/accuracy instead of
// re-implementing (cascade classifiers). latency is charged by the pipeline.
struct DetectorProfile {
  double latency = 1.0;
  double p_detect = 0.85;
  double centroid_noise_sigma = 1.0;  // px
};

// Box mask in hexcone (H deg, S, V) space: pixel passes iff every channel is
// within tol of center (hue distance taken modulo 360).
struct ColorMaskParams {
  double center[3] = {0.0, 0.0, 0.22};
  double tol[3] = {180.0, 1.0, 0.18};
};

void rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b, double& h,
                double& s, double& v);

GrayFrame to_gray(const Frame& frame);
GrayFrame threshold(const GrayFrame& gray, const ThresholdParams& params);
// |curr - prev| thresholded in binary mode regardless of params.mode.
GrayFrame frame_difference(const GrayFrame& prev, const GrayFrame& curr,
                           const ThresholdParams& params);
GrayFrame color_mask(const Frame& frame, const ColorMaskParams& params);
// 8-connectivity labeling of nonzero pixels; blobs in raster order of first pixel.
std::vector<Blob> connected_components(const GrayFrame& binary);
// Size gate: square-equivalent diameter sqrt(area_px) scaled to mm at
// z_nominal must lie strictly inside (d_min_mm, d_max_mm).
std::vector<Detection> filter_blobs(const std::vector<Blob>& blobs,
                                    const CameraModel& camera, double z_nominal,
                                    double timestamp, double d_min_mm = 0.5,
                                    double d_max_mm = 7.0);
std::vector<Detection> profiled_detect(const std::vector<MosquitoState>& truth,
                                       const CameraModel& camera,
                                       const DetectorProfile& profile, Rng& rng);

}  // namespace mz
