// Flight kinematics: attractant field, speed ramp, heading walk, box bounce.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "errors.hpp"
#include "scene_flight.hpp"

using namespace mz;

namespace {

bool near_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

bool same_vec(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace

TEST_CASE("concentration: source peak and length-scale falloff") {
  AttractantField f;
  f.source = {0.0, 0.0, 300.0};
  f.strength = 0.8;
  f.length_scale = 40.0;
  CHECK(concentration_at(f, f.source) == doctest::Approx(0.8).epsilon(1e-12));
  // one length scale out -> half the peak
  CHECK(concentration_at(f, {40.0, 0.0, 300.0}) ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(concentration_at(f, {0.0, 80.0, 300.0}) ==
        doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("ramp: clamps at both ends, exact midpoint") {
  CHECK(ramp_F(0.1, 0.2, 0.9) == 0.0);
  CHECK(ramp_F(0.2, 0.2, 0.9) == 0.0);
  CHECK(ramp_F(0.95, 0.2, 0.9) == 1.0);
  CHECK(ramp_F(0.55, 0.2, 0.9) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ramp_F(-3.0, 0.2, 0.9) == 0.0);
}

TEST_CASE("ramp: degenerate band rejected") {
  CHECK_THROWS_AS(ramp_F(0.5, 0.9, 0.9), ConfigError);
  CHECK_THROWS_AS(ramp_F(0.5, 0.9, 0.2), ConfigError);
}

TEST_CASE("speed: interpolates s_max down to s_min") {
  FlightParams p;
  p.s_max = 1000.0;
  p.s_min = 250.0;
  CHECK(flight_speed(p, 0.0) == 1000.0);
  CHECK(flight_speed(p, 1.0) == 250.0);
  CHECK(flight_speed(p, 0.5) == doctest::Approx(625.0).epsilon(1e-12));
  CHECK_THROWS_AS(flight_speed(p, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(flight_speed(p, 1.01), std::invalid_argument);
}

TEST_CASE("step: displacement is speed*dt along heading") {
  FlightParams p;
  p.dt = 0.01;
  MosquitoState st;
  st.position = {5.0, -3.0, 290.0};
  st.heading = {1.0, 0.0, 0.0};
  st.speed = 1000.0;
  const MosquitoState out = step(st, p, Wind{});
  CHECK(near_rel(out.position.x, 15.0, 1e-12));
  CHECK(out.position.y == -3.0);
  CHECK(out.position.z == 290.0);
}

TEST_CASE("step: wind advects by wind*dt on top of self-motion") {
  FlightParams p;
  p.dt = 0.01;
  MosquitoState st;
  st.position = {0.0, 0.0, 300.0};
  st.heading = {0.0, 0.0, 1.0};
  st.speed = 400.0;
  Wind w;
  w.velocity = {0.0, 100.0, 0.0};
  const MosquitoState out = step(st, p, w);
  CHECK(near_rel(out.position.y, 1.0, 1e-12));
  CHECK(near_rel(out.position.z, 304.0, 1e-12));
}

TEST_CASE("step: wind superposition is exact for dyadic inputs") {
  // dt, speed, wind and position all dyadic -> no rounding anywhere, so the
  // windy step must land exactly wind*dt away from the calm step
  FlightParams p;
  p.dt = 1.0 / 64.0;
  MosquitoState st;
  st.position = {0.25, -0.5, 288.0};
  st.heading = {0.0, 1.0, 0.0};
  st.speed = 256.0;
  Wind w;
  w.velocity = {128.0, -64.0, 32.0};
  const MosquitoState calm = step(st, p, Wind{});
  const MosquitoState windy = step(st, p, w);
  CHECK(windy.position.x - calm.position.x == 2.0);
  CHECK(windy.position.y - calm.position.y == -1.0);
  CHECK(windy.position.z - calm.position.z == 0.5);
}

TEST_CASE("heading: full pull in saturation snaps at the source") {
  AttractantField f;
  f.source = {10.0, 0.0, 300.0};
  f.strength = 1.0;
  f.length_scale = 500.0;  // concentration ~1 across the whole box
  f.pull = 1.0;            // full blend weight -> heading replaced outright
  FlightParams p;
  p.sigma_turn = 0.0;
  p.p_sharp = 0.0;
  MosquitoState st;
  st.position = {0.0, 0.0, 300.0};
  st.heading = {0.0, 1.0, 0.0};
  Rng rng(11);
  const Vec3 h = update_heading(st, f, p, rng);
  CHECK(near_rel(h.x, 1.0, 1e-12));
  CHECK(std::fabs(h.y) < 1e-12);
  CHECK(std::fabs(h.z) < 1e-12);
}

TEST_CASE("heading: below threshold the heading persists") {
  AttractantField f;
  f.source = {10.0, 0.0, 300.0};
  f.strength = 0.04;  // peak concentration under the default threshold
  FlightParams p;
  p.sigma_turn = 0.0;
  p.p_sharp = 0.0;
  MosquitoState st;
  st.position = {-50.0, 20.0, 280.0};
  st.heading = {0.0, 0.0, 1.0};
  Rng rng(11);
  const Vec3 h = update_heading(st, f, p, rng);
  CHECK(h.x == 0.0);
  CHECK(h.y == 0.0);
  CHECK(h.z == 1.0);
}

TEST_CASE("heading: partial pull blends by weight pull*F") {
  AttractantField f;
  f.source = {100.0, 0.0, 300.0};
  f.strength = 2.0;  // saturated at the probe -> F = 1, weight = pull
  f.length_scale = 400.0;
  f.pull = 0.25;
  FlightParams p;
  p.sigma_turn = 0.0;
  p.p_sharp = 0.0;
  MosquitoState st;
  st.position = {0.0, 0.0, 300.0};
  st.heading = {0.0, 1.0, 0.0};
  Rng rng(3);
  const Vec3 h = update_heading(st, f, p, rng);
  // hand-built expectation: (1-w)*heading + w*unit(source - pos), normalized
  const double n = std::sqrt(0.25 * 0.25 + 0.75 * 0.75);
  CHECK(near_rel(h.x, 0.25 / n, 1e-12));
  CHECK(near_rel(h.y, 0.75 / n, 1e-12));
  CHECK(std::fabs(h.z) < 1e-15);
}

TEST_CASE("heading: always unit, sharp turns bounded by the draw angle") {
  AttractantField f;
  f.strength = 0.0;
  FlightParams p;
  p.sigma_turn = 0.0;
  p.p_sharp = 1.0;  // force a sharp turn every step
  MosquitoState st;
  st.heading = {1.0, 0.0, 0.0};
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 h = update_heading(st, f, p, rng);
    CHECK(std::fabs(h.norm() - 1.0) < 1e-9);
    // deflection about a random axis never exceeds the drawn angle's bound
    const double dot = h.x * st.heading.x + h.y * st.heading.y + h.z * st.heading.z;
    const double ang = std::acos(std::clamp(dot, -1.0, 1.0));
    CHECK(ang <= p.sharp_turn_hi + 1e-9);
    st.heading = h;
  }
}

TEST_CASE("heading: sharp-turn frequency matches p_sharp") {
  AttractantField f;
  f.strength = 0.0;  // never tracking
  FlightParams p;
  p.sigma_turn = 0.0;  // only sharp turns can change the heading
  p.p_sharp = 0.05;
  MosquitoState st;
  st.heading = {1.0, 0.0, 0.0};
  Rng rng(101);
  int turns = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vec3 h = update_heading(st, f, p, rng);
    if (!same_vec(h, st.heading)) ++turns;
  }
  const double freq = double(turns) / n;
  CHECK(freq > 0.05 - 0.007);
  CHECK(freq < 0.05 + 0.007);
}

TEST_CASE("reflect: interior states untouched") {
  BoxRegion box;
  MosquitoState st;
  st.position = {10.0, 10.0, 300.0};
  st.heading = {0.0, 0.0, 1.0};
  const MosquitoState out = reflect_at_bounds(st, box);
  CHECK(same_vec(out.position, st.position));
  CHECK(same_vec(out.heading, st.heading));
}

TEST_CASE("reflect: mirrors overshoot and negates the heading component") {
  BoxRegion box;  // x in [-80, 80]
  MosquitoState st;
  st.position = {82.0, 0.0, 300.0};
  st.heading = {0.6, 0.8, 0.0};
  const MosquitoState out = reflect_at_bounds(st, box);
  CHECK(out.position.x == doctest::Approx(78.0).epsilon(1e-12));
  CHECK(out.heading.x == doctest::Approx(-0.6).epsilon(1e-12));
  CHECK(out.heading.y == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("reflect: pathological overshoot clamps to the face and counts") {
  BoxRegion box;  // y span 120
  MosquitoState st;
  st.position = {0.0, -300.0, 300.0};
  st.heading = {0.0, -1.0, 0.0};
  ReflectStats stats;
  const MosquitoState out = reflect_at_bounds(st, box, &stats);
  CHECK(out.position.y == box.min_corner.y);
  CHECK(stats.clamped == 1);
  CHECK(box.contains(out.position));
}

TEST_CASE("scene: containment holds over a long wild run") {
  BoxRegion box;
  AttractantField field;
  FlightParams params;
  params.sigma_turn = 0.5;  // violent jitter to stress the bounce
  params.p_sharp = 0.1;
  Wind w;
  w.velocity = {60.0, -40.0, 20.0};
  FlightScene scene(box, field, params, w, 4, 1.0, 77);
  for (int i = 0; i < 25000; ++i) {
    scene.advance_one_step();
    for (const auto& st : scene.states()) {
      REQUIRE(box.contains(st.position));
      REQUIRE(std::fabs(st.heading.norm() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("scene: advance(n) replays n single steps bit-identically") {
  BoxRegion box;
  AttractantField field;
  FlightParams params;
  FlightScene a(box, field, params, Wind{}, 3, 1.0, 123);
  FlightScene b(box, field, params, Wind{}, 3, 1.0, 123);
  for (int i = 0; i < 100; ++i) a.advance_one_step();
  b.advance(100);
  REQUIRE(a.states().size() == b.states().size());
  for (std::size_t i = 0; i < a.states().size(); ++i) {
    CHECK(same_vec(a.states()[i].position, b.states()[i].position));
    CHECK(same_vec(a.states()[i].heading, b.states()[i].heading));
    CHECK(a.states()[i].speed == b.states()[i].speed);
  }
}

TEST_CASE("scene: same seed, same trajectory; different seed diverges") {
  BoxRegion box;
  AttractantField field;
  FlightParams params;
  FlightScene a(box, field, params, Wind{}, 2, 1.0, 5);
  FlightScene b(box, field, params, Wind{}, 2, 1.0, 5);
  FlightScene c(box, field, params, Wind{}, 2, 1.0, 6);
  a.advance(480);
  b.advance(480);
  c.advance(480);
  bool diverged = false;
  for (std::size_t i = 0; i < a.states().size(); ++i) {
    CHECK(same_vec(a.states()[i].position, b.states()[i].position));
    if (!same_vec(a.states()[i].position, c.states()[i].position)) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("scene: noise-free tracking closes on the source") {
  // strong field, no jitter: each step heads straight at the source, so the
  // distance shrinks monotonically while more than one step-length away
  BoxRegion box;
  AttractantField field;
  field.source = {40.0, 20.0, 310.0};
  field.strength = 5.0;  // above threshold across the whole box
  field.length_scale = 400.0;
  field.pull = 1.0;  // full blend weight -> beeline
  FlightParams params;
  params.sigma_turn = 0.0;
  params.p_sharp = 0.0;
  params.s_min = 100.0;
  FlightScene scene(box, field, params, Wind{}, 1, 1.0, 9);
  scene.states()[0].position = {-70.0, -50.0, 270.0};
  auto dist = [&] {
    return (scene.states()[0].position - field.source).norm();
  };
  const double step_len = params.s_max * params.dt;
  double prev = dist();
  for (int i = 0; i < 600; ++i) {
    scene.advance_one_step();
    const double d = dist();
    if (prev > step_len) CHECK(d < prev + 1e-12);
    prev = d;
  }
  CHECK(prev < 5.0);  // parked in a tight orbit around the source
}

TEST_CASE("scene: dead mosquitoes stop moving") {
  BoxRegion box;
  AttractantField field;
  FlightParams params;
  FlightScene scene(box, field, params, Wind{}, 2, 1.0, 31);
  scene.states()[0].alive = false;
  const Vec3 frozen = scene.states()[0].position;
  scene.advance(50);
  CHECK(same_vec(scene.states()[0].position, frozen));
  CHECK(!same_vec(scene.states()[1].position, frozen));
}
