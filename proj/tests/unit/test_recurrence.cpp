#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "dynlab/recurrence.hpp"

using namespace dynlab;

namespace {

struct Takens {
  System sys;
  SampleCloud cloud;
};

Takens takens(double r) {
  const System base = make_fixed_points(2);
  const Point a{{0.0, 0.0}, 0, 0};
  const Point b{{0.0, 0.0}, 1, 0};
  System sys = takens_suspension({a, a, a, b, b, b}, -3, base);
  SampleCloud cloud = takens_cloud(sys, {a, b}, 20).with_radius(r);
  return {std::move(sys), std::move(cloud)};
}

}  // namespace

TEST_CASE("chain digraphs") {
  const System quarter = make_rotation(0.25);
  const auto orbit = orbit_closure_sample(quarter, Point::real(0.0), Horizon(8), 0.0);
  const auto dg = chain_digraph(quarter, orbit, 1e-3);
  CHECK(dg.edges().size() == 4);
  CHECK(strongly_connected(dg));
  CHECK(chain_recurrent_set(dg).size() == 4);

  const System fixed = make_fixed_points(1);
  const auto loop = chain_digraph(fixed, make_cloud(fixed.space_ptr(), {Point{}}, 1.0), 0.1);
  CHECK(loop.out[0] == std::vector<std::size_t>{0});

  ChainDigraph path;
  path.out = {{1}, {2}, {2}};
  CHECK(chain_recurrent_set(path) == std::vector<std::size_t>{2});

  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}});
  CHECK(strongly_connected(chain_digraph(cat, sample_space(cat.space_ptr(), 32), 1.0 / 16)));
}

TEST_CASE("Birkhoff center") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 128);
  const auto bk = birkhoff_center_iteration(rot, cloud, 1.0 / 64, Horizon(128));
  CHECK(bk.fixpoint);
  CHECK(bk.stages.front().size() == cloud.size());
  CHECK(bk.final_set() == bk.stages.front());

  const Takens t = takens(5e-4);
  const auto tk = birkhoff_center_iteration(t.sys, t.cloud, 5e-4, Horizon(64));
  CHECK(tk.fixpoint);
  REQUIRE(tk.final_set().size() == 2);
  for (std::size_t i : tk.final_set()) CHECK(t.cloud[i].source != kArcSource);

  const System disk = make_disk_twist();
  const auto dc = sample_space(disk.space_ptr(), 16);
  CHECK(birkhoff_center_iteration(disk, dc, dc.r, Horizon(200)).final_set().size() == dc.size());
}

TEST_CASE("prolongation") {
  const System fixed = make_fixed_points(3);
  const auto space = std::static_pointer_cast<const FiniteMetricSpace>(fixed.space_ptr());
  const auto cloud = make_cloud(fixed.space_ptr(), space->points(), 0.5);
  const auto p = prolongation(fixed, cloud, 0, 0.25, Horizon(8));
  CHECK(p.prol_set == std::vector<std::size_t>{0});

  const Takens t = takens(5e-4);
  // The base point a repels: arc states near it flow away along the arc.
  std::size_t a = 0;
  for (std::size_t i = 0; i < t.cloud.size(); ++i)
    if (t.cloud[i].source == 0 && t.cloud[i].index == 0) a = i;
  const auto pa = prolongation(t.sys, t.cloud, a, 0.2, Horizon(64));
  CHECK(std::any_of(pa.prol_set.begin(), pa.prol_set.end(), [&](std::size_t i) { return t.cloud[i].source == kArcSource; }));
}

TEST_CASE("capturing and Lyapunov-type checks") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 64);
  std::vector<std::size_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(capturing_check(rot, cloud, all, all, Horizon(16), 0.01).capturing);
  CHECK(lem1_check(rot, cloud, cloud.r, Horizon(64), all).passed);

  const Takens t = takens(5e-4);
  std::size_t b = 0;
  for (std::size_t i = 0; i < t.cloud.size(); ++i)
    if (t.cloud[i].source == 0 && t.cloud[i].index == 1) b = i;
  std::vector<std::size_t> everything(t.cloud.size());
  for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = i;
  CHECK_FALSE(capturing_check(t.sys, t.cloud, {b}, everything, Horizon(64), 0.01).capturing);
}

TEST_CASE("mincenter and product probe") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 512);
  const auto mc = mincenter_approx(rot, cloud, 1.0 / 256, Horizon(1024));
  CHECK(mc.components.size() == 1);
  CHECK(mc.mincenter.size() == cloud.size());

  const Takens t = takens(5e-4);
  CHECK(mincenter_approx(t.sys, t.cloud, 5e-4, Horizon(64)).mincenter.size() == 2);

  const System fixed = make_fixed_points(1);
  CHECK(product_transitivity_probe(fixed, make_cloud(fixed.space_ptr(), {Point{}}, 1.0), 0.1, Horizon(4)) ==
        ProbeResult::transitive);
  const auto small = sample_space(rot.space_ptr(), 32);
  CHECK(product_transitivity_probe(rot, small, 1.0 / 32, Horizon(256)) == ProbeResult::not_transitive);
  const System cat = make_toral_automorphism({{{2, 1}, {1, 1}}});
  // Grid points are rational, so their cat orbits are short: cells must not be too fine.
  CHECK(product_transitivity_probe(cat, sample_space(cat.space_ptr(), 32), 0.25, Horizon(16)) == ProbeResult::transitive);
}
