#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynlab/sensitivity.hpp"
#include "dynlab/symbolic.hpp"

using namespace dynlab;

namespace {

const std::vector<double> kGrid{0.25, 0.125, 0.0625};

}  // namespace

TEST_CASE("rotation is equicontinuous at every scale") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const SensitivityContext ctx(rot, sample_space(rot.space_ptr(), 128), Horizon(256));
  for (double eps : kGrid) CHECK(eq_epsilon(ctx, eps).eq_points.size() == 128);
  CHECK(ns_check(ctx, kGrid).positive());
  CHECK(ae_check(ctx, kGrid).positive());
  CHECK(le_check(ctx, kGrid).positive());
  CHECK(hns_check(ctx, kGrid).positive());
  CHECK(sensitivity_constant(ctx, kGrid) == 0.0);
  CHECK(local_fragmentation_check(ctx, kGrid));
}

TEST_CASE("a fixed point is NS") {
  const System one = make_fixed_points(1);
  const SensitivityContext ctx(one, make_cloud(one.space_ptr(), {Point{}}, 1.0), Horizon(4));
  CHECK(ns_check(ctx, kGrid).positive());
  const WmReport wm = wm_triviality_test(ctx, kGrid, 0.5);
  CHECK(wm.outcome == WmOutcome::pass);
}

TEST_CASE("full shift is sensitive") {
  const System shift = shift_system("full", 2, 8, {champernowne_source()});
  const auto cloud = orbit_closure_sample(shift, Point::symbolic(0, 0), Horizon(256), 0.0);
  const SensitivityContext ctx(shift, cloud, Horizon(16), 0.25);
  CHECK(eq_epsilon(ctx, 0.5).eq_points.empty());
  CHECK(sensitivity_constant(ctx, {0.5, 0.25}) >= 0.5);
  const Verdict le = le_check(ctx, {0.5});
  CHECK_FALSE(le.positive());
  CHECK_FALSE(le.witness.empty());
}

TEST_CASE("cat map is sensitive and not HNS") {
  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}}, true);
  const SensitivityContext ctx(cat, sample_space(cat.space_ptr(), 32), Horizon(16), std::ldexp(1.0, -5));
  const std::vector<double> grid{0.25, 0.125, 0.0625};
  CHECK_FALSE(ns_check(ctx, grid).positive());
  CHECK(sensitivity_constant(ctx, grid) >= 0.0625);
  const Verdict hns = hns_check(ctx, grid);
  CHECK_FALSE(hns.positive());
  CHECK_FALSE(hns.witness.empty());
  // Sensitive systems satisfy the weak-mixing implication vacuously.
  CHECK(wm_triviality_test(ctx, grid, 1.0 / 16).outcome == WmOutcome::pass);
}

TEST_CASE("rotation passes the weak-mixing test vacuously") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const SensitivityContext ctx(rot, sample_space(rot.space_ptr(), 64), Horizon(64));
  const WmReport wm = wm_triviality_test(ctx, kGrid, 1.0 / 256);
  CHECK(wm.outcome == WmOutcome::pass);
  CHECK(wm.ns);
}

TEST_CASE("disk twist: Eq points stay near the centre") {
  const System disk = make_disk_twist();
  const SampleCloud cloud = sample_space(disk.space_ptr(), 26);
  const SensitivityContext ctx(disk, cloud, Horizon(1000));
  for (std::size_t i : eq_epsilon(ctx, 0.1).eq_points) CHECK(std::hypot(cloud[i].x[0], cloud[i].x[1]) <= 0.1);
  CHECK_FALSE(ae_check(ctx, {0.03125}).positive());
}

TEST_CASE("grids are validated") {
  CHECK_THROWS_AS(validate_grid({}), InputError);
  CHECK_THROWS_AS(validate_grid({0.1, 0.2}), InputError);
  CHECK_THROWS_AS(validate_grid({0.5, -1.0}), InputError);
  CHECK_NOTHROW(validate_grid({0.5, 0.25}));
}
