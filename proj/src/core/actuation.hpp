#pragma once
#include <array>
#include <optional>

#include "vec3.hpp"

namespace mz {

struct GalvoState {
  double theta_x = 0.0;  // optical deflection, rad
  double theta_y = 0.0;
  double timestamp = 0.0;
};

struct GalvoLimits {
  double settle_time = 5.0e-5;  // s; 20 kpps point rate
  double max_slew = 700.0;      // optical rad/s for large jumps
  double field_limit = 0.35;    // rad, per axis
};

struct LaserSpec {
  double power_w = 1.0;
  double wavelength_nm = 450.0;
  double spot_diameter_at_nominal = 3.0;  // mm, 1/e^2
  double nominal_range = 300.0;           // mm
  double area_growth_across_box = 0.02;   // far-face / near-face area - 1
  double box_span = 70.0;                 // mm, depth over which growth is stated
};

struct FirePlan {
  Vec3 aim;
  double move_time = 0.0;
  double dwell = 0.5;
};

struct KillModel {
  double rate_k = 0.0;  // 1/s against the overlap-time integral
  // rate_k chosen so a centered `dwell` on a stationary target of body_radius
  // at nominal range kills with probability exactly 0.5.
  static KillModel calibrated(const LaserSpec& spec, double body_radius = 1.0,
                              double dwell = 0.5);
};

// Optical deflection for an aim point in galvo coordinates (galvo at origin,
// boresight +z). nullopt when the point is not in front or beyond the field.
std::optional<std::array<double, 2>> angles_for_target(const Vec3& aim,
                                                       const GalvoLimits& limits);
// Inverse: where the beam at (theta_x, theta_y) crosses the plane at depth z.
Vec3 aim_point_at_range(double theta_x, double theta_y, double z);

double move_time(const GalvoState& from, double to_theta_x, double to_theta_y,
                 const GalvoLimits& limits);

// 1/e^2 spot diameter at range z; area grows linearly in z, scaled so the
// far face of the default box carries area_growth more area than the near face.
double spot_diameter(double z, const LaserSpec& spec);

// Fraction of a circular Gaussian beam (1/e^2 diameter spot_diameter_mm)
// falling inside a disc of body_radius at lateral miss distance `miss`.
double overlap_fraction(double miss, double body_radius, double spot_diameter_mm);

// overlap_fraction evaluated against a beam pointed through `aim` from the
// origin, with the spot size taken at the target's axial range.
double beam_overlap(const Vec3& aim, const Vec3& target, double body_radius,
                    const LaserSpec& spec);

double kill_probability(double overlap_integral, const KillModel& model);

// exp(-x)*I0(x) for x >= 0; exposed for the quadrature oracle tests.
double bessel_i0_scaled(double x);

}  // namespace mz
