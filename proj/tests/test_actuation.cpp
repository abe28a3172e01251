// Galvo pointing, beam geometry, Gaussian overlap, dose-to-kill model.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "actuation.hpp"
#include "doctest.h"
#include "rng.hpp"

using namespace mz;

namespace {

// independent oracle: plain 2-D midpoint quadrature of the Gaussian beam
// profile over the body disc, in polar coordinates (no Bessel, no
// Gauss-Legendre nodes shared with the implementation)
double overlap_quadrature(double miss, double body_radius, double spot_diameter) {
  const double sigma = spot_diameter / 4.0;
  const int nr = 1500, nphi = 512;
  const double dr = body_radius / nr;
  const double dphi = 2.0 * M_PI / nphi;
  double sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < nphi; ++j) {
      const double phi = (j + 0.5) * dphi;
      const double d2 = r * r + miss * miss - 2.0 * r * miss * std::cos(phi);
      sum += r * std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return sum * dr * dphi / (2.0 * M_PI * sigma * sigma);
}

double i0_scaled_series(double x) {
  // power series for I0, scaled by exp(-x); converges for the tested range
  long double term = 1.0L, sum = 1.0L;
  const long double q = (long double)(x) * x / 4.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / ((long double)(k) * k);
    sum += term;
    if (term < sum * 1e-22L) break;
  }
  return double(sum * expl(-(long double)(x)));
}

}  // namespace

TEST_CASE("angles: boresight and the similar-triangles deflection") {
  const GalvoLimits lim;
  const auto zero = angles_for_target({0.0, 0.0, 300.0}, lim);
  REQUIRE(zero.has_value());
  CHECK((*zero)[0] == 0.0);
  CHECK((*zero)[1] == 0.0);
  const auto off = angles_for_target({30.0, 0.0, 300.0}, lim);
  REQUIRE(off.has_value());
  CHECK((*off)[0] == doctest::Approx(std::atan(0.1)).epsilon(1e-12));
  CHECK((*off)[1] == 0.0);
}

TEST_CASE("angles: field limit and points behind the mirror are rejected") {
  const GalvoLimits lim;  // 0.35 rad per axis
  CHECK(!angles_for_target({400.0, 0.0, 300.0}, lim).has_value());
  CHECK(!angles_for_target({0.0, -200.0, 300.0}, lim).has_value());
  CHECK(!angles_for_target({0.0, 0.0, -5.0}, lim).has_value());
  CHECK(!angles_for_target({0.0, 0.0, 0.0}, lim).has_value());
  // just inside the limit still resolves
  const double z = 300.0;
  const double edge = z * std::tan(lim.field_limit) - 0.01;
  CHECK(angles_for_target({edge, 0.0, z}, lim).has_value());
}

TEST_CASE("angles: aim_point_at_range inverts angles_for_target") {
  const GalvoLimits lim;
  Rng rng(88);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 aim{rng.uniform(-80, 80), rng.uniform(-60, 60), rng.uniform(265, 335)};
    const auto ang = angles_for_target(aim, lim);
    REQUIRE(ang.has_value());
    const Vec3 back = aim_point_at_range((*ang)[0], (*ang)[1], aim.z);
    CHECK(std::fabs(back.x - aim.x) < 1e-9);
    CHECK(std::fabs(back.y - aim.y) < 1e-9);
    CHECK(back.z == aim.z);
  }
}

TEST_CASE("move_time: settle floor and slew-limited jumps") {
  const GalvoLimits lim;  // settle 50 us, slew 700 rad/s
  const GalvoState at{0.0, 0.0, 0.0};
  CHECK(move_time(at, 0.0, 0.0, lim) == lim.settle_time);
  CHECK(move_time(at, 1.0e-5, 0.0, lim) == lim.settle_time);
  CHECK(move_time(at, 0.07, 0.0, lim) == doctest::Approx(1.0e-4).epsilon(1e-12));
  CHECK(move_time(at, 0.07, -0.035, lim) == doctest::Approx(1.0e-4).epsilon(1e-12));
}

TEST_CASE("move_time: never below settle, monotone in jump size") {
  const GalvoLimits lim;
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const GalvoState from{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 0.0};
    const double dx = rng.uniform(-0.3, 0.3), dy = rng.uniform(-0.3, 0.3);
    const double t1 = move_time(from, from.theta_x + dx, from.theta_y + dy, lim);
    const double t2 =
        move_time(from, from.theta_x + 2 * dx, from.theta_y + 2 * dy, lim);
    CHECK(t1 >= lim.settle_time);
    CHECK(t2 >= t1);
  }
}

TEST_CASE("spot: anchored at nominal range, 2% area growth across the box") {
  const LaserSpec spec;
  CHECK(spot_diameter(300.0, spec) == spec.spot_diameter_at_nominal);
  const double near = spot_diameter(265.0, spec);
  const double far = spot_diameter(335.0, spec);
  CHECK((far * far) / (near * near) == doctest::Approx(1.02).epsilon(1e-12));
  CHECK(spot_diameter(280.0, spec) < spot_diameter(320.0, spec));
}

TEST_CASE("overlap: centered closed form") {
  const double R = 1.0, D = 3.0, sigma = D / 4.0;
  const double want = 1.0 - std::exp(-R * R / (2.0 * sigma * sigma));
  CHECK(overlap_fraction(0.0, R, D) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("overlap: body engulfing the beam captures nearly everything") {
  CHECK(overlap_fraction(0.0, 20.0, 3.0) > 0.99);
  CHECK(overlap_fraction(0.5, 20.0, 3.0) > 0.99);
}

TEST_CASE("overlap: ten spot diameters off is a clean miss") {
  CHECK(overlap_fraction(30.0, 1.0, 3.0) == 0.0);
  CHECK(overlap_fraction(30.0, 1.0, 3.0) < 1e-6);
}

TEST_CASE("overlap: monotone in miss distance") {
  double prev = overlap_fraction(0.0, 1.5, 3.0);
  for (double m = 0.1; m < 8.0; m += 0.1) {
    const double o = overlap_fraction(m, 1.5, 3.0);
    CHECK(o <= prev + 1e-12);
    prev = o;
  }
}

TEST_CASE("overlap: matches 2-D quadrature on a miss/radius grid") {
  const double D = 3.0;
  for (const double miss : {0.0, 0.5, 1.0, 2.0, 4.0})
    for (const double R : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      const double got = overlap_fraction(miss, R, D);
      const double want = overlap_quadrature(miss, R, D);
      CHECK(std::fabs(got - want) <= 1e-3);
    }
}

TEST_CASE("bessel: scaled I0 against its power series") {
  for (const double x : {0.0, 0.1, 0.5, 1.0, 2.0, 3.75, 5.0, 10.0, 20.0, 30.0}) {
    const double got = bessel_i0_scaled(x);
    const double want = i0_scaled_series(x);
    CHECK(std::fabs(got - want) <= 1e-6 * want);
  }
}

TEST_CASE("beam_overlap: on-axis target reduces to the centered form") {
  const LaserSpec spec;
  const Vec3 aim{0.0, 0.0, 300.0};
  const double got = beam_overlap(aim, {2.0, 0.0, 300.0}, 1.0, spec);
  CHECK(got == doctest::Approx(overlap_fraction(2.0, 1.0, spot_diameter(300.0, spec)))
                   .epsilon(1e-12));
  // a target on the beam axis at a different range picks up that range's spot
  const Vec3 u = aim.normalized();
  const Vec3 tgt = 320.0 * u;
  CHECK(beam_overlap(aim, tgt, 1.0, spec) ==
        doctest::Approx(overlap_fraction(0.0, 1.0, spot_diameter(320.0, spec)))
            .epsilon(1e-9));
}

TEST_CASE("beam_overlap: oblique beam uses perpendicular miss distance") {
  const LaserSpec spec;
  const Vec3 aim{50.0, -30.0, 300.0};
  const Vec3 u = aim.normalized();
  const Vec3 tgt{48.0, -28.0, 301.0};
  const double axial = dot(tgt, u);
  const double miss = (tgt - axial * u).norm();
  const double want = overlap_fraction(miss, 1.2, spot_diameter(axial, spec));
  CHECK(beam_overlap(aim, tgt, 1.2, spec) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("beam_overlap: targets behind the mirror get nothing") {
  const LaserSpec spec;
  CHECK(beam_overlap({0.0, 0.0, 300.0}, {0.0, 0.0, -5.0}, 1.0, spec) == 0.0);
}

TEST_CASE("kill model: calibration pins the reference dwell at one half") {
  const LaserSpec spec;
  const double o0 = overlap_fraction(0.0, 1.0, spot_diameter(300.0, spec));
  const KillModel km = KillModel::calibrated(spec);
  CHECK(kill_probability(0.5 * o0, km) == doctest::Approx(0.5).epsilon(1e-12));
  // a different reference dwell moves the anchor with it
  const KillModel km2 = KillModel::calibrated(spec, 1.0, 2.0);
  CHECK(kill_probability(2.0 * o0, km2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kill model: zero dose never kills, dose response is monotone") {
  const KillModel km = KillModel::calibrated(LaserSpec{});
  CHECK(kill_probability(0.0, km) == 0.0);
  double prev = 0.0;
  for (double dose = 0.01; dose < 5.0; dose += 0.01) {
    const double p = kill_probability(dose, km);
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
  CHECK(kill_probability(1.0e6, km) == doctest::Approx(1.0));
}

TEST_CASE("dose accounting: an exiting target accrues less than a parked one") {
  const LaserSpec spec;
  const Vec3 aim{0.0, 0.0, 300.0};
  const double dt = 1.0 / 240.0;
  double parked = 0.0, exiting = 0.0;
  for (int k = 0; k < 120; ++k) {
    parked += beam_overlap(aim, {0.0, 0.0, 300.0}, 1.0, spec) * dt;
    exiting += beam_overlap(aim, {k * 0.05, 0.0, 300.0}, 1.0, spec) * dt;
  }
  CHECK(exiting < parked);
  CHECK(parked == doctest::Approx(0.5 * overlap_fraction(0.0, 1.0, 3.0)));
}
