#include "scene_flight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "errors.hpp"

namespace mz {

double concentration_at(const AttractantField& field, const Vec3& p) {
  const double r2 = (p - field.source).norm2();
  const double l2 = field.length_scale * field.length_scale;
  return field.strength / (1.0 + r2 / l2);
}

double ramp_F(double b, double b0, double b_sat) {
  if (!(b_sat > b0)) {
    throw ConfigError("attractant.saturation: must exceed attractant.threshold");
  }
  return std::clamp((b - b0) / (b_sat - b0), 0.0, 1.0);
}

double flight_speed(const FlightParams& params, double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw std::invalid_argument("flight_speed: f outside [0, 1]");
  }
  return params.s_max - (params.s_max - params.s_min) * f;
}

namespace {

// Rodrigues rotation of v about unit axis k by angle.
Vec3 rotate_about(const Vec3& v, const Vec3& k, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c));
}

// Uniform unit vector; consumes exactly two uniforms.
Vec3 random_unit(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

Vec3 update_heading(const MosquitoState& state, const AttractantField& field,
          const FlightParams& params, Rng& rng) {
  const double b = concentration_at(field, state.position);
  const double f = ramp_F(b, field.threshold, field.saturation);

  // Tracking is a soft pull: the heading blends toward the source with
  // weight pull * f, so below the ramp base the walk is a pure trace and at
  // full ramp with pull = 1 it snaps outright. The soft default keeps the
  // swarm orbiting the source at flight speed instead of collapsing onto it.
  Vec3 h = state.heading;
  const double w = field.pull * f;
  if (w > 0.0) {
    const Vec3 to_source = field.source - state.position;
    if (to_source.norm2() > 0.0) {
      const Vec3 s = to_source.normalized();
      const Vec3 blended = (1.0 - w) * h + w * s;
      h = blended.norm2() > 1e-12 ? blended.normalized() : s;
    }
  }

  const Vec3 axis = random_unit(rng);
  const double jitter = params.sigma_turn * rng.normal();
  if (jitter != 0.0) h = rotate_about(h, axis, jitter);

  const double u_sharp = rng.uniform01();
  if (u_sharp < params.p_sharp) {
    const Vec3 sharp_axis = random_unit(rng);
    const double sharp = rng.uniform(params.sharp_turn_lo, params.sharp_turn_hi);
    h = rotate_about(h, sharp_axis, sharp);
  }

  return h.normalized();
}

MosquitoState step(const MosquitoState& state, const FlightParams& params,
         const Wind& wind) {
  MosquitoState next = state;
  // Wind displacement added as a separate term so the contribution
  // superposes on the flight displacement.
  next.position = state.position + (state.speed * params.dt) * state.heading;
  next.position += wind.velocity * params.dt;
  return next;
}

namespace {

void reflect_axis(double& pos, double& heading, double lo, double hi, int& clamped) {
  const double size = hi - lo;
  if (pos > hi) {
    const double over = pos - hi;
    if (over < size) {
      pos = hi - over;
    } else {
      pos = hi;
      ++clamped;
    }
    heading = -heading;
  } else if (pos < lo) {
    const double under = lo - pos;
    if (under < size) {
      pos = lo + under;
    } else {
      pos = lo;
      ++clamped;
    }
    heading = -heading;
  }
}

}  // namespace

MosquitoState reflect_at_bounds(const MosquitoState& state, const BoxRegion& box,
                ReflectStats* stats) {
  MosquitoState next = state;
  int clamped = 0;
  reflect_axis(next.position.x, next.heading.x, box.min_corner.x, box.max_corner.x, clamped);
  reflect_axis(next.position.y, next.heading.y, box.min_corner.y, box.max_corner.y, clamped);
  reflect_axis(next.position.z, next.heading.z, box.min_corner.z, box.max_corner.z, clamped);
  if (stats) stats->clamped += clamped;
  return next;
}

FlightScene::FlightScene(const BoxRegion& box, const AttractantField& field,
            const FlightParams& params, const Wind& wind,
            int mosquito_count, double body_radius, std::uint64_t seed)
  : box_(box), field_(field), params_(params), wind_(wind), rng_(seed) {
  states_.reserve(mosquito_count);
  for (int i = 0; i < mosquito_count; ++i) {
    MosquitoState m;
    m.id = i;
    m.position = {rng_.uniform(box.min_corner.x, box.max_corner.x),
           rng_.uniform(box.min_corner.y, box.max_corner.y),
           rng_.uniform(box.min_corner.z, box.max_corner.z)};
    m.heading = random_unit(rng_);
    m.body_radius = body_radius;
    m.speed = params.s_max;
    states_.push_back(m);
  }
}

void FlightScene::advance_one_step() {
  for (auto& m : states_) {
    if (!m.alive) continue;
    m.heading = update_heading(m, field_, params_, rng_);
    const double f =
      ramp_F(concentration_at(field_, m.position), field_.threshold, field_.saturation);
    m.speed = flight_speed(params_, f);
    m = step(m, params_, wind_);
    m = reflect_at_bounds(m, box_, &reflect_stats_);
  }
}

void FlightScene::advance(int steps) {
  for (int i = 0; i < steps; ++i) advance_one_step();
}

}  // namespace mz
