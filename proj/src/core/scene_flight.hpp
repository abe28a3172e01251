#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "vec3.hpp"

namespace mz {

// Flight kinematics: speed from the attractant ramp, heading from a
// tracking/tracing random walk, position integrated per step with wind.

struct FlightParams {
  double s_max = 1000.0;  // mm/s
  double s_min = 250.0;   // mm/s
  double dt = 1.0 / 240.0;  // s
  double sigma_turn = 0.01;       // rad, per-step heading jitter std
  double p_sharp = 1.0 / 480.0;   // per-step probability of a sharp turn
  double sharp_turn_lo = 0.8;     // rad
  double sharp_turn_hi = 2.6;     // rad
};

// Smooth bounded concentration field around a point source. Shape:
// b(p) = strength / (1 + |p - source|^2 / length_scale^2).
struct AttractantField {
  Vec3 source{0.0, 0.0, 300.0};
  double strength = 1.0;       // q, concentration at the source
  double length_scale = 60.0;  // lambda, mm
  double threshold = 0.05;     // b0: ramp base, no source information below
  double saturation = 0.5;     // b_sat: ramp saturates here
  double pull = 0.0;  // per-step heading blend weight toward the source at
                      // full ramp; 1 snaps the heading outright. The default
                      // lure shapes speed only: slow passes near the source
                      // concentrate residence time there without bending paths.
};

struct Wind {
  Vec3 velocity{};  // mm/s
};

struct BoxRegion {
  Vec3 min_corner{-80.0, -60.0, 265.0};
  Vec3 max_corner{80.0, 60.0, 335.0};

  bool contains(const Vec3& p) const {
    return p.x >= min_corner.x && p.x <= max_corner.x && p.y >= min_corner.y &&
       p.y <= max_corner.y && p.z >= min_corner.z && p.z <= max_corner.z;
  }
  Vec3 center() const { return (min_corner + max_corner) * 0.5; }
  Vec3 size() const { return max_corner - min_corner; }
};

struct MosquitoState {
  int id = 0;
  Vec3 position{};
  Vec3 heading{1.0, 0.0, 0.0};  // unit
  double speed = 0.0;           // mm/s, refreshed every step
  bool alive = true;
  double body_radius = 1.0;  // mm
};

double concentration_at(const AttractantField& field, const Vec3& p);

// Clamped linear ramp between b0 and b_sat, in [0, 1].
double ramp_F(double b, double b0, double b_sat);

// s = s_max - (s_max - s_min) * f
double flight_speed(const FlightParams& params, double f);

[[nodiscard]] Vec3 update_heading(const MosquitoState& state, const AttractantField& field,
          const FlightParams& params, Rng& rng);

// position' = position + speed*dt*heading + wind*dt. Uses the speed stored on
// the state; callers refresh it from flight_speed() first.
[[nodiscard]] MosquitoState step(const MosquitoState& state, const FlightParams& params,
         const Wind& wind);

struct ReflectStats {
  int clamped = 0;  // displacements that exceeded the box in one step
};

// Specular reflection at the box faces; heading component negated.
[[nodiscard]] MosquitoState reflect_at_bounds(const MosquitoState& state, const BoxRegion& box,
                ReflectStats* stats = nullptr);

// Owns the ground-truth states and advances them on the fixed dt grid.
class FlightScene {
public:
  FlightScene(const BoxRegion& box, const AttractantField& field,
        const FlightParams& params, const Wind& wind, int mosquito_count,
        double body_radius, std::uint64_t seed);

  void advance_one_step();
  void advance(int steps);

  const std::vector<MosquitoState>& states() const { return states_; }
  std::vector<MosquitoState>& states() { return states_; }
  const BoxRegion& box() const { return box_; }
  const FlightParams& params() const { return params_; }
  const Wind& wind() const { return wind_; }
  const AttractantField& field() const { return field_; }
  const ReflectStats& reflect_stats() const { return reflect_stats_; }

private:
  BoxRegion box_;
  AttractantField field_;
  FlightParams params_;
  Wind wind_;
  std::vector<MosquitoState> states_;
  Rng rng_;
  ReflectStats reflect_stats_;
};

}  // namespace mz
