#include "actuation.hpp"

#include <algorithm>
#include <cmath>

namespace mz {

std::optional<std::array<double, 2>> angles_for_target(const Vec3& aim,
                                                       const GalvoLimits& limits) {
  if (!(aim.z > 1e-9)) return std::nullopt;
  const double tx = std::atan(aim.x / aim.z);
  const double ty = std::atan(aim.y / aim.z);
  if (std::fabs(tx) > limits.field_limit || std::fabs(ty) > limits.field_limit)
    return std::nullopt;
  return std::array<double, 2>{tx, ty};
}

Vec3 aim_point_at_range(double theta_x, double theta_y, double z) {
  return Vec3{z * std::tan(theta_x), z * std::tan(theta_y), z};
}

double move_time(const GalvoState& from, double to_theta_x, double to_theta_y,
                 const GalvoLimits& limits) {
  const double d = std::max(std::fabs(to_theta_x - from.theta_x),
                            std::fabs(to_theta_y - from.theta_y));
  return std::max(limits.settle_time, d / limits.max_slew);
}

double spot_diameter(double z, const LaserSpec& spec) {
  const double d0 = spec.spot_diameter_at_nominal;
  const double area0 = 0.25 * 3.14159265358979323846 * d0 * d0;
  // slope chosen so area(nominal+span/2)/area(nominal-span/2) = 1 + growth
  const double g = spec.area_growth_across_box;
  const double slope = g / (spec.box_span * (1.0 + 0.5 * g));
  const double area = std::max(1e-12 * area0,
                               area0 * (1.0 + slope * (z - spec.nominal_range)));
  return std::sqrt(4.0 * area / 3.14159265358979323846);
}

double bessel_i0_scaled(double x) {
  // Abramowitz & Stegun 9.8.1 / 9.8.2 polynomial fits
  if (x < 3.75) {
    const double t = (x / 3.75) * (x / 3.75);
    const double i0 =
        1.0 + t * (3.5156229 +
                   t * (3.0899424 +
                        t * (1.2067492 +
                             t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
    return i0 * std::exp(-x);
  }
  const double t = 3.75 / x;
  const double p =
      0.39894228 +
      t * (0.01328592 +
           t * (0.00225319 +
                t * (-0.00157565 +
                     t * (0.00916281 +
                          t * (-0.02057706 +
                               t * (0.02635537 +
                                    t * (-0.01647633 + t * 0.00392377)))))));
  return p / std::sqrt(x);
}

namespace {

// 64-point Gauss-Legendre nodes/weights on [-1, 1], built once by Newton
// iteration on the Legendre recurrence.
struct GaussLegendre {
  double x[64];
  double w[64];
  GaussLegendre() {
    const int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p0 / pp;
        if (std::fabs(z - z1) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

const GaussLegendre& gl64() {
  static const GaussLegendre g;
  return g;
}

}  // namespace

double overlap_fraction(double miss, double body_radius, double spot_diameter_mm) {
  if (body_radius <= 0.0 || spot_diameter_mm <= 0.0) return 0.0;
  const double sigma = spot_diameter_mm / 4.0;  // 1/e^2 radius = 2 sigma
  const double m = std::fabs(miss);
  const double R = body_radius;
  if (m > R + 9.0 * sigma) return 0.0;  // beyond any double-precision mass
  if (m == 0.0) return 1.0 - std::exp(-R * R / (2.0 * sigma * sigma));
  // P(disc) = int_0^R r/sigma^2 exp(-(r-m)^2/(2 sigma^2)) I0~(r m / sigma^2) dr
  const auto& g = gl64();
  const double s2 = sigma * sigma;
  double acc = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double r = 0.5 * R * (g.x[i] + 1.0);
    const double d = r - m;
    acc += g.w[i] * (r / s2) * std::exp(-d * d / (2.0 * s2)) *
           bessel_i0_scaled(r * m / s2);
  }
  return std::clamp(acc * 0.5 * R, 0.0, 1.0);
}

double beam_overlap(const Vec3& aim, const Vec3& target, double body_radius,
                    const LaserSpec& spec) {
  if (!(aim.z > 1e-9)) return 0.0;
  const Vec3 u = aim.normalized();
  const double axial = dot(target, u);
  if (!(axial > 1e-9)) return 0.0;
  const double miss = (target - axial * u).norm();
  return overlap_fraction(miss, body_radius, spot_diameter(axial, spec));
}

KillModel KillModel::calibrated(const LaserSpec& spec, double body_radius,
                                double dwell) {
  const double o0 =
      overlap_fraction(0.0, body_radius, spec.spot_diameter_at_nominal);
  KillModel m;
  m.rate_k = std::log(2.0) / (dwell * o0);
  return m;
}

double kill_probability(double overlap_integral, const KillModel& model) {
  if (overlap_integral <= 0.0) return 0.0;
  return 1.0 - std::exp(-model.rate_k * overlap_integral);
}

}  // namespace mz
