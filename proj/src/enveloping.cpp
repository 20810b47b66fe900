#include "dynlab/enveloping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynlab/sensitivity.hpp"

namespace dynlab {
namespace {

std::vector<std::int64_t> exponent_order(std::int64_t n) {
  std::vector<std::int64_t> order{0};
  for (std::int64_t k = 1; k <= n; ++k) {
    order.push_back(k);
    order.push_back(-k);
  }
  return order;
}

// sup-distance, giving up as soon as it exceeds `cap`.
double capped_sup(const AmbientSpace& space, const std::vector<Point>& a, const std::vector<Point>& b, double cap) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, space.distance(a[i], b[i]));
    if (best > cap) return best;
  }
  return best;
}

double capped_sup(const std::vector<double>& a, const std::vector<double>& b, double cap) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, std::fabs(a[i] - b[i]));
    if (best > cap) return best;
  }
  return best;
}

std::size_t nearest_index(const SampleCloud& cloud, const Point& p, double& err) {
  std::size_t best = 0;
  err = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double d = cloud.space->distance(p, cloud[j]);
    if (d < err) {
      err = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

double sup_distance(const AmbientSpace& space, const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() != b.size()) throw InputError("tables cover different clouds");
  return capped_sup(space, a, b, std::numeric_limits<double>::infinity());
}

std::vector<std::vector<Point>> iterate_tables(const System& sys, const SampleCloud& cloud, const Horizon& horizon) {
  const auto order = exponent_order(horizon.n());
  std::vector<std::vector<Point>> tables(order.size(), std::vector<Point>(cloud.size()));
  parallel_for(order.size(), [&](std::size_t k) {
    for (std::size_t i = 0; i < cloud.size(); ++i) tables[k][i] = sys.iterate(cloud[i], order[k]);
  });
  return tables;
}

EnvelopeApprox envelope_approx(const System& sys, const SampleCloud& cloud, const Horizon& horizon, double tol) {
  if (!(tol > 0.0)) throw InputError("envelope tolerance must be positive");
  const auto order = exponent_order(horizon.n());
  auto tables = iterate_tables(sys, cloud, horizon);
  EnvelopeApprox env;
  env.horizon = horizon.n();
  env.tol = tol;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    // Leader clustering: the first representative within tol absorbs the table.
    std::vector<char> close(env.maps.size(), 0);
    parallel_for(env.maps.size(), [&](std::size_t m) {
      close[m] = capped_sup(sys.space(), env.maps[m].table, tables[k], tol) <= tol;
    });
    auto it = std::find(close.begin(), close.end(), 1);
    if (it != close.end()) {
      env.maps[static_cast<std::size_t>(it - close.begin())].exponents.push_back(order[k]);
      continue;
    }
    ClusterMap map;
    map.table = std::move(tables[k]);
    map.exponents.push_back(order[k]);
    map.tol = tol;
    env.maps.push_back(std::move(map));
  }
  return env;
}

std::vector<RealTable> ef_family(const EnvelopeApprox& env, const Observable& f, double tol) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  std::vector<RealTable> family;
  for (const ClusterMap& map : env.maps) {
    RealTable t;
    t.values.reserve(map.table.size());
    for (const Point& p : map.table) t.values.push_back(f(p));
    bool merged = false;
    for (RealTable& existing : family) {
      if (capped_sup(existing.values, t.values, tol) <= tol) {
        existing.exponents.insert(existing.exponents.end(), map.exponents.begin(), map.exponents.end());
        merged = true;
        break;
      }
    }
    if (!merged) {
      t.exponents = map.exponents;
      family.push_back(std::move(t));
    }
  }
  return family;
}

std::vector<RealTable> ef_family(const System& sys, const Observable& f, const SampleCloud& cloud,
                                 const Horizon& horizon, double tol) {
  return ef_family(envelope_approx(sys, cloud, horizon, tol), f, tol);
}

FragmentationReport fragmented_family_check(const std::vector<RealTable>& family, const SampleCloud& cloud,
                                            double epsilon, double r) {
  if (family.empty()) throw InputError("family is empty");
  std::vector<std::vector<double>> tables;
  for (const auto& t : family) tables.push_back(t.values);
  return fragmentation_kernel(cloud, family_sup_pseudometric(std::move(tables), cloud.size()), epsilon, r);
}

FragmentationReport fragmented_family_check(const std::vector<std::vector<Point>>& family, const SampleCloud& cloud,
                                            double epsilon, double r) {
  if (family.empty()) throw InputError("family is empty");
  return fragmentation_kernel(cloud, point_family_pseudometric(cloud.space, family, cloud.size()), epsilon, r);
}

std::vector<FragmentationReport> raw_family_check(const System& sys, const SampleCloud& cloud, const Horizon& horizon,
                                                  const std::vector<double>& epsilon_grid, double r) {
  validate_grid(epsilon_grid);
  // Only points sharing a ball with someone else ever enter a diameter.
  const Neighborhoods balls = ball_neighborhoods(cloud, r);
  std::vector<std::vector<Point>> orbits(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    if (balls[i].size() < 2) return;
    auto& orbit = orbits[i];
    orbit.reserve(static_cast<std::size_t>(horizon.size()));
    orbit.push_back(cloud[i]);
    Point fwd = cloud[i], back = cloud[i];
    for (std::int64_t k = 1; k <= horizon.n(); ++k) {
      fwd = sys.forward(fwd);
      back = sys.inverse(back);
      orbit.push_back(fwd);
      orbit.push_back(back);
    }
  });
  auto shared = std::make_shared<const std::vector<std::vector<Point>>>(std::move(orbits));
  const SpacePtr space = cloud.space;
  const Pseudometric rho{"raw-iterates(N=" + std::to_string(horizon.n()) + ")", [shared, space](std::size_t i, std::size_t j) {
                           const auto& a = (*shared)[i];
                           const auto& b = (*shared)[j];
                           double best = 0.0;
                           for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
                             best = std::max(best, space->distance(a[k], b[k]));
                           return best;
                         }};
  const BallPairs pairs(cloud, rho, r);
  std::vector<FragmentationReport> out;
  for (double eps : epsilon_grid) out.push_back(fragmentation_kernel(pairs, eps));
  return out;
}

double continuity_defect(const ClusterMap& map, const SampleCloud& cloud, double r) {
  const Neighborhoods balls = ball_neighborhoods(cloud, r);
  std::vector<double> diam(cloud.size(), 0.0);
  parallel_for(cloud.size(), [&](std::size_t x) {
    const auto& ball = balls[x];
    for (std::size_t a = 0; a < ball.size(); ++a)
      for (std::size_t b = a + 1; b < ball.size(); ++b)
        diam[x] = std::max(diam[x], cloud.space->distance(map.table[ball[a]], map.table[ball[b]]));
  });
  return diam.empty() ? 0.0 : *std::max_element(diam.begin(), diam.end());
}

FragmentationReport baire_class_proxy(const std::vector<Point>& table, const SampleCloud& cloud, double r,
                                      double epsilon) {
  return fragmented_family_check(std::vector<std::vector<Point>>{table}, cloud, epsilon, r);
}

FragmentationReport baire_class_proxy(const std::vector<double>& table, const SampleCloud& cloud, double r,
                                      double epsilon) {
  RealTable t;
  t.values = table;
  return fragmented_family_check(std::vector<RealTable>{t}, cloud, epsilon, r);
}

FSemigroupReport f_semigroup_check(const EnvelopeApprox& env, const SampleCloud& cloud, double epsilon, double r) {
  const std::size_t m = env.maps.size();
  if (m == 0) throw InputError("envelope is empty");
  const AmbientSpace& space = *cloud.space;
  FSemigroupReport rep;

  // proj[q][x]: nearest cloud index to q(x).
  std::vector<std::vector<std::size_t>> proj(m, std::vector<std::size_t>(cloud.size()));
  std::vector<double> proj_err(m, 0.0);
  parallel_for(m, [&](std::size_t q) {
    for (std::size_t x = 0; x < cloud.size(); ++x) {
      double err = 0.0;
      proj[q][x] = nearest_index(cloud, env.maps[q].table[x], err);
      proj_err[q] = std::max(proj_err[q], err);
    }
  });
  rep.projection_error = *std::max_element(proj_err.begin(), proj_err.end());

  auto composed = [&](std::size_t p, std::size_t q) {
    std::vector<Point> t(cloud.size());
    for (std::size_t x = 0; x < cloud.size(); ++x) t[x] = env.maps[p].table[proj[q][x]];
    return t;
  };
  std::vector<double> defect(m * m, 0.0);
  parallel_for(m * m, [&](std::size_t k) {
    const auto t = composed(k / m, k % m);
    double best = std::numeric_limits<double>::infinity();
    for (const ClusterMap& s : env.maps) {
      // Stop a candidate as soon as it cannot beat the best; ties do not matter for the minimum.
      double d = 0.0;
      for (std::size_t x = 0; x < t.size() && d < best; ++x) d = std::max(d, space.distance(s.table[x], t[x]));
      best = std::min(best, d);
      if (best == 0.0) break;
    }
    defect[k] = best;
  });
  rep.closure_defect = *std::max_element(defect.begin(), defect.end());
  rep.degraded = rep.closure_defect > env.tol;

  std::vector<std::vector<double>> sup(m, std::vector<double>(m, 0.0));
  parallel_for(m, [&](std::size_t a) {
    for (std::size_t b = 0; b < m; ++b) sup[a][b] = a == b ? 0.0 : sup_distance(space, env.maps[a].table, env.maps[b].table);
  });
  auto maps_space = std::make_shared<FiniteMetricSpace>(sup, "sup metric over envelope maps");
  const SampleCloud maps_cloud = make_cloud(maps_space, maps_space->points(), r);
  Pseudometric left{"left-translations", [&](std::size_t q1, std::size_t q2) {
                      double best = 0.0;
                      for (std::size_t p = 0; p < m; ++p) {
                        for (std::size_t x = 0; x < cloud.size(); ++x) {
                          best = std::max(best, space.distance(env.maps[p].table[proj[q1][x]], env.maps[p].table[proj[q2][x]]));
                        }
                      }
                      return best;
                    }};
  const auto kernel = fragmentation_kernel(maps_cloud, left, epsilon, r);
  rep.fragmented = kernel.fragmented;
  rep.residual = kernel.residual;
  return rep;
}

bool TwoArrowsReport::claims_hold() const {
  if (!discrete()) return false;
  for (const auto& row : rows) {
    if (!row.converged || !row.limits_distinct || row.factor_error > tol || !row.baire_minus || !row.baire_plus) return false;
  }
  return true;
}

TwoArrowsReport verify_two_arrows(const ContinuedFraction& alpha, std::int64_t depth, double tol,
                                  const std::vector<std::int64_t>& ms, std::int64_t shift_range) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const TwoArrowsModel model = sturmian_two_arrows(alpha, depth, std::max<std::int64_t>(300, shift_range + 100));
  const SampleCloud& cloud = model.cloud;
  const AmbientSpace& space = model.system.space();
  TwoArrowsReport rep;
  rep.depth = depth;
  rep.tol = tol;
  rep.shift_range = shift_range;
  rep.baire_r = cloud.r;

  auto shifted = [&](std::int64_t n) {
    std::vector<Point> t(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) t[i] = Point::symbolic(cloud[i].source, cloud[i].index + n);
    return t;
  };

  // Discreteness of {T^n : |n| <= shift_range} in the sup metric.
  std::vector<std::vector<Point>> shifts;
  for (std::int64_t n = -shift_range; n <= shift_range; ++n) shifts.push_back(shifted(n));
  std::vector<double> row_min(shifts.size(), std::numeric_limits<double>::infinity());
  parallel_for(shifts.size(), [&](std::size_t a) {
    for (std::size_t b = a + 1; b < shifts.size(); ++b)
      row_min[a] = std::min(row_min[a], capped_sup(space, shifts[a], shifts[b], 1.0 - 1e-12));
  });
  rep.min_shift_distance = *std::min_element(row_min.begin(), row_min.end());

  const auto conv = alpha.convergents();
  const long double a = alpha.value();
  rep.rows.resize(ms.size());
  parallel_for(ms.size(), [&](std::size_t idx) {
    TwoArrowsGammaRow& row = rep.rows[idx];
    row.m = ms[idx];
    row.gamma = static_cast<double>(a * row.m - std::floor(a * row.m));
    // n alpha approaches m alpha from below when q alpha - p < 0.
    for (std::size_t k = 1; k < conv.size(); ++k) {
      const auto [p, q] = conv[k];
      if (q > depth) break;
      if (q < 2) continue;
      const long double err = static_cast<long double>(q) * a - static_cast<long double>(p);
      (err < 0 ? row.below : row.above).push_back(row.m + q);
    }
    if (row.below.size() < 2 || row.above.size() < 2) return;
    auto predicted = [&](std::int32_t tag) {
      std::vector<Point> t(cloud.size());
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point& x = cloud[i];
        t[i] = model.on_orbit(x) ? Point::symbolic(tag, x.index + row.m) : Point::symbolic(x.source, x.index + row.m);
      }
      return t;
    };
    const auto lim_minus = shifted(row.below.back());
    const auto lim_plus = shifted(row.above.back());
    row.below_cauchy = sup_distance(space, shifted(row.below[row.below.size() - 2]), lim_minus);
    row.above_cauchy = sup_distance(space, shifted(row.above[row.above.size() - 2]), lim_plus);
    row.minus_error = sup_distance(space, lim_minus, predicted(TwoArrowsModel::kMinus));
    row.plus_error = sup_distance(space, lim_plus, predicted(TwoArrowsModel::kPlus));
    row.limits_distance = sup_distance(space, lim_minus, lim_plus);
    row.converged = row.below_cauchy <= tol && row.above_cauchy <= tol && row.minus_error <= tol && row.plus_error <= tol;
    row.limits_distinct = row.limits_distance > tol;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (model.on_orbit(cloud[i])) continue;
      const double target = model.project(cloud[i]) + row.gamma;
      for (const auto* lim : {&lim_minus, &lim_plus}) {
        row.factor_error = std::max(row.factor_error, circle_distance(model.project((*lim)[i]), target));
      }
    }
    row.baire_minus = baire_class_proxy(predicted(TwoArrowsModel::kMinus), cloud, rep.baire_r, rep.baire_epsilon).fragmented;
    row.baire_plus = baire_class_proxy(predicted(TwoArrowsModel::kPlus), cloud, rep.baire_r, rep.baire_epsilon).fragmented;
  });
  return rep;
}

}  // namespace dynlab
