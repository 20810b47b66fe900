#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dynlab/pseudometrics.hpp"
#include "dynlab/symbolic.hpp"

using namespace dynlab;

namespace {

double arc(double u, double v) {
  const double d = std::fabs(u - v);
  return std::min(d, 1.0 - d);
}

// Cat map on the torus iterated by hand.
double cat_dh(double x0, double y0, double x1, double y1, int n) {
  double best = std::max(arc(x0, x1), arc(y0, y1));
  for (int k = 0; k < n; ++k) {
    auto step = [](double& x, double& y) {
      const double nx = std::fmod(2 * x + y, 1.0), ny = std::fmod(x + y, 1.0);
      x = nx;
      y = ny;
    };
    step(x0, y0);
    step(x1, y1);
    best = std::max({best, arc(x0, x1), arc(y0, y1)});
  }
  return best;
}

SampleCloud antichain() {
  auto space = std::make_shared<FiniteMetricSpace>(std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
  return make_cloud(space, space->points(), 1.0);
}

Pseudometric all_one() {
  return Pseudometric{"one", [](std::size_t, std::size_t) { return 1.0; }};
}

}  // namespace

TEST_CASE("d_H") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Point x = Point::real(u(rng)), y = Point::real(u(rng));
    CHECK(d_H(rot, x, y, Horizon(200)) == doctest::Approx(rot.distance(x, y)).epsilon(1e-9));
  }
  CHECK(d_H(rot, Point::real(0.3), Point::real(0.3), Horizon(10)) == 0.0);

  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}});
  const double v = d_H(cat, Point::planar(0.0, 0.0), Point::planar(0.01, 0.0), Horizon(8));
  CHECK(v >= 0.25);
  // Forward iterates alone already give the value; d_H also looks backwards.
  CHECK(v >= cat_dh(0.0, 0.0, 0.01, 0.0, 8) - 1e-12);
}

TEST_CASE("rho_Hf") {
  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}});
  const Point x = Point::planar(0.0, 0.0), y = Point::planar(0.01, 0.0);
  const Observable one = make_observable("1", [](const Point&) { return 1.0; }, 1.0);
  CHECK(rho_Hf(cat, one, x, y, Horizon(8)) == 0.0);

  const Observable first = make_observable("x0", [](const Point& p) { return p.x[0]; }, 1.0);
  const double r = rho_Hf(cat, first, x, y, Horizon(8));
  double oracle = 0.0;
  for (std::int64_t n = -8; n <= 8; ++n) oracle = std::max(oracle, std::fabs(cat.iterate(x, n).x[0] - cat.iterate(y, n).x[0]));
  CHECK(r == doctest::Approx(oracle));
  CHECK(r >= 0.0);

  const System shift = shift_system("full", 2, 8, {champernowne_source()});
  const auto& seq = static_cast<const SequenceSpace&>(shift.space());
  const Observable coord = make_observable("w0", [&](const Point& p) { return double(seq.symbol(p, 0)); }, 1.0);
  // Champernowne starts 0 1 10 11 ...: positions 0 and 1 differ.
  const Point a = Point::symbolic(0, 0), b = Point::symbolic(0, 1);
  REQUIRE(seq.first_difference(a, b, 8).has_value());
  const auto k = *seq.first_difference(a, b, 8);
  CHECK(rho_Hf(shift, coord, a, b, Horizon(k)) == 1.0);
}

TEST_CASE("eps_net") {
  const auto cloud = sample_space(std::make_shared<CircleSpace>(), 8);
  const auto rho = ambient_pseudometric(cloud);
  CHECK(eps_net(cloud.size(), rho, 0.3).size() == 2);
  CHECK(eps_net(cloud.size(), rho, 0.5).size() == 1);
  CHECK(eps_net(cloud.size(), rho, 0.1).size() == 8);
}

TEST_CASE("fragmentation kernel") {
  const auto cloud = sample_space(std::make_shared<CircleSpace>(), 64);
  const auto small = fragmentation_kernel(cloud, ambient_pseudometric(cloud), 2 * cloud.r, cloud.r);
  CHECK(small.fragmented);
  CHECK(small.residual.empty());
  CHECK(small.stages == 1);

  const SampleCloud four = antichain();
  const auto stuck = fragmentation_kernel(four, all_one(), 0.5, 1.0);
  CHECK_FALSE(stuck.fragmented);
  CHECK(stuck.residual.size() == 4);

  const BallPairs pairs(four, all_one(), 1.0);
  CHECK(fragmentation_defect(pairs, {1.5, 1.0, 0.5}) == 1.0);
  CHECK(std::isinf(fragmentation_defect(pairs, {0.75, 0.5})));
}

TEST_CASE("fragmentation defect of the ambient metric") {
  const auto cloud = sample_space(std::make_shared<IntervalSpace>(), 33);
  const BallPairs pairs(cloud, ambient_pseudometric(cloud), cloud.r);
  CHECK(fragmentation_defect(pairs, {0.5, 0.25, 0.125, 0.0625, 0.03125}) <= 0.03125);
}

TEST_CASE("Morse orbit closure is not fragmented below 1") {
  const System morse = shift_system("morse", 2, 32, {subshift_point(morse_generator())});
  const auto cloud = orbit_closure_sample(morse, Point::symbolic(0, 0), Horizon(128), 0.0);
  const double r = std::ldexp(1.0, -6);
  const BallPairs pairs(cloud, horizon_pseudometric(morse, cloud, Horizon(64)), r);
  CHECK(fragmentation_defect(pairs, {0.5, 0.25}) >= 1.0);
}

TEST_CASE("family sup pseudometric") {
  const std::vector<double> f{0.0, 0.3, 1.0};
  std::vector<double> minus_f;
  for (double v : f) minus_f.push_back(-v);
  const auto zero = family_sup_pseudometric({{2.0, 2.0, 2.0}}, 3);
  const auto single = family_sup_pseudometric({f}, 3);
  const auto both = family_sup_pseudometric({f, minus_f}, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(zero(i, j) == 0.0);
      CHECK(single(i, j) == doctest::Approx(std::fabs(f[i] - f[j])));
      CHECK(both(i, j) == single(i, j));
    }
  CHECK_THROWS_AS(family_sup_pseudometric({{1.0}}, 3), InputError);
}

TEST_CASE("separability profiles") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 512);
  const auto prof = separability_profile(rot, {{cloud, Horizon(10)}, {cloud, Horizon(100)}, {cloud, Horizon(1000)}}, 0.1);
  REQUIRE(prof.rows.size() == 3);
  CHECK(prof.rows[0].net_size == prof.rows[1].net_size);
  CHECK(prof.rows[1].net_size == prof.rows[2].net_size);

  const System fixed = make_fixed_points(1);
  const auto one = make_cloud(fixed.space_ptr(), {Point{}}, 1.0);
  const auto p = separability_profile(fixed, {{one, Horizon(5)}, {one, Horizon(50)}}, 0.5);
  for (const auto& row : p.rows) CHECK(row.net_size == 1);
}
