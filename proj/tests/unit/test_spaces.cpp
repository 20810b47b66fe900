#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynlab/spaces.hpp"

using namespace dynlab;

TEST_CASE("grid samples") {
  const auto circle = sample_space(std::make_shared<CircleSpace>(), 8);
  CHECK(circle.size() == 8);
  CHECK(circle.r == doctest::Approx(1.0 / 16));

  const auto interval = sample_space(std::make_shared<IntervalSpace>(), 5);
  REQUIRE(interval.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(interval[i].x[0] == doctest::Approx(0.25 * i));
  CHECK(interval.r == doctest::Approx(1.0 / 8));

  const auto torus = sample_space(std::make_shared<Torus2Space>(), 4);
  CHECK(torus.size() == 16);
  CHECK(torus.r == doctest::Approx(1.0 / 8));
  CHECK(probe_covering_radius(torus, 64) <= torus.r + 1e-12);
}

TEST_CASE("orbit segments") {
  const double a = std::numbers::sqrt2 - 1.0;
  const System rot = make_rotation(a);
  const auto seg = orbit_segment(rot, Point::real(0.0), Horizon(3));
  REQUIRE(seg.size() == 7);
  for (const auto& [n, p] : seg) CHECK(circle_distance(p.x[0], std::fmod(n * a + 10.0, 1.0)) < 1e-12);

  const auto zero = orbit_segment(rot, Point::real(0.3), Horizon(0));
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].first == 0);
  CHECK(zero[0].second == Point::real(0.3));

  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}});
  for (const auto& [n, p] : orbit_segment(cat, Point::planar(0.0, 0.0), Horizon(5))) {
    CHECK(p.x[0] == 0.0);
    CHECK(p.x[1] == 0.0);
  }
}

TEST_CASE("orbit closure samples") {
  CHECK(orbit_closure_sample(make_rotation(0.25), Point::real(0.0), Horizon(100), 0.0).size() == 4);
  CHECK(orbit_closure_sample(make_rotation(std::numbers::sqrt2 - 1.0), Point::real(0.0), Horizon(1000), 1e-6).size() ==
        2001);

  const auto disk = orbit_closure_sample(make_disk_twist(), Point::planar(0.5, 0.0), Horizon(50), 0.0);
  CHECK(disk.size() <= 101);
  for (const auto& p : disk.points) CHECK(std::hypot(p.x[0], p.x[1]) == doctest::Approx(0.5));
}

TEST_CASE("gallery makers validate parameters") {
  CHECK_THROWS_AS(make_rotation(1.5), InputError);
  CHECK_THROWS_AS(make_toral_automorphism({{{2, 0}, {0, 1}}}), InputError);
  CHECK_THROWS_AS(make_toral_automorphism({{{1, 1}, {0, 1}}}, true), InputError);
  CHECK_THROWS_AS(make_circle_homeo(0.3, 1.0), InputError);
}

TEST_CASE("takens suspension") {
  const System base = make_fixed_points(2);
  const Point a{{0.0, 0.0}, 0, 0};
  const Point b{{0.0, 0.0}, 1, 0};

  const System same = takens_suspension({}, 0, base);
  CHECK(same.space().kind() == SpaceKind::finite);

  const System y = takens_suspension({a, a, a, b, b, b}, -3, base);
  CHECK(y.space().kind() == SpaceKind::suspension);
  const SampleCloud cloud = takens_cloud(y, {a, b}, 20);
  CHECK(cloud.size() == 2 + 41);
  // Arc states flow forward and converge to the base points.
  const Point arc{{0.0, 0.0}, 0, kArcSource};
  CHECK(y.distance(y.iterate(arc, 400), b) < 1e-2);
  CHECK(y.distance(y.iterate(arc, -400), a) < 1e-2);
  CHECK(y.iterate(y.iterate(arc, 7), -7) == arc);
}

TEST_CASE("merge tolerance") {
  const auto space = std::make_shared<CircleSpace>();
  const auto merged = merge_points(*space, {Point::real(0.1), Point::real(0.1 + 1e-9), Point::real(0.2)}, 1e-6);
  CHECK(merged.size() == 2);
}
