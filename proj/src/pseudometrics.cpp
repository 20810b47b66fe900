#include "dynlab/pseudometrics.hpp"

#include <algorithm>
#include <cmath>

namespace dynlab {
namespace {

std::uint64_t pair_key(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

// Walks both orbits out to +-N, stopping a direction once both points are fixed.
template <typename Gap>
double orbit_sup(const System& sys, const Point& x, const Point& y, std::int64_t n, Gap gap) {
  double best = gap(x, y);
  for (int dir : {1, -1}) {
    Point a = x;
    Point b = y;
    for (std::int64_t k = 1; k <= n; ++k) {
      const Point na = dir > 0 ? sys.forward(a) : sys.inverse(a);
      const Point nb = dir > 0 ? sys.forward(b) : sys.inverse(b);
      if (!std::isfinite(na.x[0]) || !std::isfinite(na.x[1]) || !std::isfinite(nb.x[0]) || !std::isfinite(nb.x[1])) {
        throw NumericError("orbit evaluation produced a non-finite point");
      }
      const bool frozen = na == a && nb == b;
      a = na;
      b = nb;
      best = std::max(best, gap(a, b));
      if (frozen) break;
    }
  }
  return best;
}

}  // namespace

Observable make_observable(std::string label, std::function<double(const Point&)> fn, double sup_norm,
                           std::optional<double> lipschitz) {
  if (!std::isfinite(sup_norm) || sup_norm < 0.0) {
    throw InputError("observable '" + label + "' needs a finite sup-norm bound");
  }
  if (lipschitz && (!std::isfinite(*lipschitz) || *lipschitz < 0.0)) {
    throw InputError("observable '" + label + "' has an invalid Lipschitz constant");
  }
  return Observable{std::move(label), std::move(fn), sup_norm, lipschitz};
}

double d_H(const System& sys, const Point& x, const Point& y, const Horizon& horizon) {
  if (x == y) return 0.0;
  if (const auto& fast = sys.horizon_distance_fn()) return fast(x, y, horizon.n());
  return orbit_sup(sys, x, y, horizon.n(), [&](const Point& a, const Point& b) { return sys.distance(a, b); });
}

double rho_Hf(const System& sys, const Observable& f, const Point& x, const Point& y, const Horizon& horizon) {
  auto gap = [&](const Point& a, const Point& b) {
    const double fa = f(a);
    const double fb = f(b);
    if (std::fabs(fa) > f.sup_norm * (1 + 1e-12) + 1e-12 || std::fabs(fb) > f.sup_norm * (1 + 1e-12) + 1e-12) {
      throw NumericError("observable '" + f.label + "' exceeded its declared sup-norm");
    }
    return std::fabs(fa - fb);
  };
  return orbit_sup(sys, x, y, horizon.n(), gap);
}

Pseudometric ambient_pseudometric(const SampleCloud& cloud) {
  return Pseudometric{"ambient-d", [cloud](std::size_t i, std::size_t j) { return cloud.distance(i, j); }};
}

Pseudometric horizon_pseudometric(const System& sys, const SampleCloud& cloud, const Horizon& horizon) {
  return Pseudometric{"d_H(N=" + std::to_string(horizon.n()) + ")", [sys, cloud, horizon](std::size_t i, std::size_t j) {
                        return d_H(sys, cloud[i], cloud[j], horizon);
                      }};
}

Pseudometric observable_pseudometric(const System& sys, const Observable& f, const SampleCloud& cloud,
                                     const Horizon& horizon) {
  return Pseudometric{"rho_Hf(" + f.label + ",N=" + std::to_string(horizon.n()) + ")",
                      [sys, f, cloud, horizon](std::size_t i, std::size_t j) {
                        return rho_Hf(sys, f, cloud[i], cloud[j], horizon);
                      }};
}

Pseudometric family_sup_pseudometric(std::vector<std::vector<double>> tables, std::size_t cloud_size) {
  for (const auto& t : tables) {
    if (t.size() != cloud_size) throw InputError("family table does not cover every cloud point");
  }
  auto shared = std::make_shared<const std::vector<std::vector<double>>>(std::move(tables));
  return Pseudometric{"family-sup(" + std::to_string(shared->size()) + " tables)",
                      [shared](std::size_t i, std::size_t j) {
                        double best = 0.0;
                        for (const auto& t : *shared) best = std::max(best, std::fabs(t[i] - t[j]));
                        return best;
                      }};
}

Pseudometric point_family_pseudometric(SpacePtr space, std::vector<std::vector<Point>> tables,
                                       std::size_t cloud_size) {
  for (const auto& t : tables) {
    if (t.size() != cloud_size) throw InputError("family table does not cover every cloud point");
  }
  auto shared = std::make_shared<const std::vector<std::vector<Point>>>(std::move(tables));
  return Pseudometric{"family-sup(" + std::to_string(shared->size()) + " point tables)",
                      [shared, space](std::size_t i, std::size_t j) {
                        double best = 0.0;
                        for (const auto& t : *shared) best = std::max(best, space->distance(t[i], t[j]));
                        return best;
                      }};
}

std::vector<std::size_t> eps_net(std::size_t cloud_size, const Pseudometric& rho, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("net epsilon must be positive");
  std::vector<std::size_t> centers;
  if (cloud_size == 0) return centers;
  std::vector<double> gap(cloud_size, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (;;) {
    centers.push_back(next);
    parallel_for(cloud_size, [&](std::size_t i) { gap[i] = std::min(gap[i], rho(next, i)); });
    std::size_t far = 0;
    for (std::size_t i = 1; i < cloud_size; ++i) {
      if (gap[i] > gap[far]) far = i;
    }
    if (gap[far] <= epsilon) break;
    next = far;
  }
  return centers;
}

SeparabilityProfile separability_profile(const System& sys, const std::vector<ScheduleEntry>& schedule,
                                         double epsilon, const Observable* f) {
  if (schedule.empty()) throw InputError("separability schedule is empty");
  SeparabilityProfile profile;
  for (const auto& entry : schedule) {
    const Pseudometric rho = f ? observable_pseudometric(sys, *f, entry.cloud, entry.horizon)
                               : horizon_pseudometric(sys, entry.cloud, entry.horizon);
    if (profile.label.empty()) profile.label = f ? "rho_Hf(" + f->label + ")" : "d_H";
    SeparabilityRow row;
    row.horizon = entry.horizon.n();
    row.epsilon = epsilon;
    row.cloud_size = entry.cloud.size();
    row.net_size = eps_net(entry.cloud.size(), rho, epsilon).size();
    profile.rows.push_back(row);
  }
  return profile;
}

BallPairs::BallPairs(const SampleCloud& cloud, const Pseudometric& rho, double r) : label_(rho.label), r_(r) {
  if (!(r > 0.0)) throw InputError("ball radius must be positive");
  balls_ = ball_neighborhoods(cloud, r);
  for (const auto& ball : balls_) {
    for (std::size_t a = 0; a < ball.size(); ++a)
      for (std::size_t b = a + 1; b < ball.size(); ++b) pair_keys_.push_back(pair_key(ball[a], ball[b]));
  }
  std::sort(pair_keys_.begin(), pair_keys_.end());
  pair_keys_.erase(std::unique(pair_keys_.begin(), pair_keys_.end()), pair_keys_.end());
  pair_values_.assign(pair_keys_.size(), 0.0);
  parallel_for(pair_keys_.size(), [&](std::size_t k) {
    pair_values_[k] = rho(static_cast<std::size_t>(pair_keys_[k] >> 32), static_cast<std::size_t>(pair_keys_[k] & 0xffffffffu));
  });
  const std::vector<char> all(balls_.size(), 1);
  full_diameter_.assign(balls_.size(), 0.0);
  parallel_for(balls_.size(), [&](std::size_t x) { full_diameter_[x] = ball_diameter(x, all); });
}

double BallPairs::value(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const auto key = pair_key(i, j);
  const auto it = std::lower_bound(pair_keys_.begin(), pair_keys_.end(), key);
  if (it == pair_keys_.end() || *it != key) throw InvariantViolation("pair outside every ball was queried");
  return pair_values_[static_cast<std::size_t>(it - pair_keys_.begin())];
}

double BallPairs::ball_diameter(std::size_t x, const std::vector<char>& alive) const {
  const auto& ball = balls_[x];
  double diam = 0.0;
  for (std::size_t a = 0; a < ball.size(); ++a) {
    if (!alive[ball[a]]) continue;
    for (std::size_t b = a + 1; b < ball.size(); ++b) {
      if (alive[ball[b]]) diam = std::max(diam, value(ball[a], ball[b]));
    }
  }
  return diam;
}

FragmentationReport fragmentation_kernel(const BallPairs& pairs, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("fragmentation epsilon must be positive");
  const std::size_t n = pairs.size();
  FragmentationReport report;
  report.epsilon = epsilon;
  report.r = pairs.r();
  report.label = pairs.label();
  report.ranks.assign(n, 0);

  std::vector<char> alive(n, 1);
  std::vector<double> diam(n);
  for (std::size_t x = 0; x < n; ++x) diam[x] = pairs.full_diameter(x);
  std::vector<std::size_t> candidates(n);
  for (std::size_t x = 0; x < n; ++x) candidates[x] = x;

  // Stage-synchronous peeling; only balls that lost a member are re-measured.
  for (int stage = 1;; ++stage) {
    std::vector<std::size_t> peel;
    for (std::size_t x : candidates) {
      if (alive[x] && diam[x] <= epsilon) peel.push_back(x);
    }
    if (peel.empty()) break;
    report.stages = stage;
    for (std::size_t x : peel) {
      alive[x] = 0;
      report.ranks[x] = stage;
    }
    std::vector<std::size_t> touched;
    for (std::size_t x : peel) {
      for (std::size_t y : pairs.balls()[x]) {
        if (alive[y]) touched.push_back(y);
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    parallel_for(touched.size(), [&](std::size_t k) { diam[touched[k]] = pairs.ball_diameter(touched[k], alive); });
    candidates = std::move(touched);
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (alive[x]) report.residual.push_back(x);
  }
  report.fragmented = report.residual.empty();
  return report;
}

FragmentationReport fragmentation_kernel(const SampleCloud& cloud, const Pseudometric& rho, double epsilon, double r) {
  return fragmentation_kernel(BallPairs(cloud, rho, r), epsilon);
}

bool replay_ranks(const BallPairs& pairs, const FragmentationReport& report) {
  const std::size_t n = pairs.size();
  std::vector<char> alive(n, 1);
  for (int stage = 1; stage <= report.stages; ++stage) {
    std::vector<std::size_t> peel;
    for (std::size_t x = 0; x < n; ++x) {
      if (report.ranks[x] == stage) peel.push_back(x);
    }
    for (std::size_t x : peel) {
      if (!alive[x] || pairs.ball_diameter(x, alive) > report.epsilon) return false;
    }
    for (std::size_t x : peel) alive[x] = 0;
  }
  for (std::size_t x : report.residual) {
    if (!alive[x] || pairs.ball_diameter(x, alive) <= report.epsilon) return false;
  }
  return std::count(alive.begin(), alive.end(), 1) == static_cast<std::ptrdiff_t>(report.residual.size());
}

double fragmentation_defect(const BallPairs& pairs, const std::vector<double>& epsilon_grid) {
  if (epsilon_grid.empty()) throw InputError("epsilon grid is empty");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0)) throw InputError("epsilon grid must be positive");
    if (i > 0 && !(epsilon_grid[i] < epsilon_grid[i - 1])) throw InputError("epsilon grid must be descending");
  }
  double defect = kNoFragmentation;
  for (double eps : epsilon_grid) {
    if (fragmentation_kernel(pairs, eps).fragmented) defect = std::min(defect, eps);
  }
  return defect;
}

}  // namespace dynlab
