#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynlab/enveloping.hpp"

using namespace dynlab;

namespace {

SampleCloud shift_cloud(const System& shift) {
  return orbit_closure_sample(shift, Point::symbolic(0, 0), Horizon(128), 0.0);
}

}  // namespace

TEST_CASE("periodic rotation has four envelope maps") {
  const System rot = make_rotation(0.25);
  const auto cloud = sample_space(rot.space_ptr(), 64);
  const auto env = envelope_approx(rot, cloud, Horizon(16), 1e-3);
  REQUIRE(env.maps.size() == 4);
  CHECK(env.maps[0].representative() == 0);
  CHECK(f_semigroup_check(env, cloud, 0.5, 0.25).fragmented);
  CHECK_THROWS_AS(envelope_approx(rot, cloud, Horizon(4), 0.0), InputError);
}

TEST_CASE("irrational rotation") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 64);
  const auto env = envelope_approx(rot, cloud, Horizon(100), 1e-2);
  CHECK(env.maps.size() > 4);
  for (const auto& m : env.maps) CHECK(continuity_defect(m, cloud, cloud.r) <= 2 * cloud.r + 1e-12);

  const Observable arc = make_observable("x", [](const Point& p) { return p.x[0]; }, 1.0);
  const Observable one = make_observable("1", [](const Point&) { return 1.0; }, 1.0);
  CHECK(ef_family(env, one, 1e-2).size() == 1);
  CHECK(ef_family(env, arc, 1e-2).size() == env.maps.size());

  const Observable cosine = make_observable("cos", [](const Point& p) { return std::cos(2 * std::numbers::pi * p.x[0]); },
                                            1.0, 2 * std::numbers::pi);
  const auto fam = ef_family(env, cosine, 1e-2);
  CHECK(fragmented_family_check(fam, cloud, 2 * std::numbers::pi * 2 * cloud.r, cloud.r).fragmented);
  CHECK(f_semigroup_check(env, cloud, 0.5, 0.25).fragmented);
}

TEST_CASE("full shift envelope") {
  const System shift = shift_system("full", 2, 8, {champernowne_source()});
  const auto cloud = shift_cloud(shift);
  const auto env = envelope_approx(shift, cloud, Horizon(8), 1e-3);
  const auto& seq = static_cast<const SequenceSpace&>(shift.space());
  const Observable coord = make_observable("w0", [&](const Point& p) { return double(seq.symbol(p, 0)); }, 1.0);
  const auto fam = ef_family(env, coord, 1e-3);
  CHECK(fam.size() == env.maps.size());
  for (std::size_t a = 0; a < fam.size(); ++a)
    for (std::size_t b = a + 1; b < fam.size(); ++b) {
      double sup = 0.0;
      for (std::size_t x = 0; x < cloud.size(); ++x) sup = std::max(sup, std::fabs(fam[a].values[x] - fam[b].values[x]));
      CHECK(sup == 1.0);
    }

  std::vector<std::vector<Point>> tables;
  for (const auto& m : env.maps) tables.push_back(m.table);
  const auto rep = fragmented_family_check(tables, cloud, 0.5, 0.25);
  CHECK_FALSE(rep.fragmented);
  CHECK(rep.residual.size() == cloud.size());
  CHECK_FALSE(f_semigroup_check(env, cloud, 0.5, 1.0).fragmented);
}

TEST_CASE("Baire proxy") {
  const auto cloud = sample_space(std::make_shared<IntervalSpace>(), 257);
  std::vector<double> smooth, parity;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    smooth.push_back(cloud[i].x[0] * cloud[i].x[0]);
    parity.push_back(static_cast<double>(i % 2));
  }
  CHECK(baire_class_proxy(smooth, cloud, 2 * cloud.r, 0.05).fragmented);
  CHECK_FALSE(baire_class_proxy(parity, cloud, 2 * cloud.r, 0.5).fragmented);

  ClusterMap identity;
  identity.table = cloud.points;
  identity.exponents = {0};
  CHECK(continuity_defect(identity, cloud, 2 * cloud.r) == doctest::Approx(4 * cloud.r));
}

TEST_CASE("raw iterate family matches the d_H kernel on an isometry") {
  const System rot = make_rotation(std::numbers::sqrt2 - 1.0);
  const auto cloud = sample_space(rot.space_ptr(), 128);
  const auto reps = raw_family_check(rot, cloud, Horizon(64), {0.25, 0.125, 0.0625}, 2 * cloud.r);
  for (const auto& rep : reps) {
    CHECK(rep.fragmented);
    const auto direct = fragmentation_kernel(cloud, horizon_pseudometric(rot, cloud, Horizon(64)), rep.epsilon, rep.r);
    CHECK(direct.ranks == rep.ranks);
  }
}
