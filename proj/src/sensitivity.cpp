#include "dynlab/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dynlab {
namespace {

std::vector<std::size_t> eq_indices(const SensitivityContext& ctx, double epsilon) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < ctx.cloud().size(); ++x)
    if (ctx.pairs().full_diameter(x) <= epsilon) out.push_back(x);
  return out;
}

bool r_dense(const SampleCloud& cloud, const std::vector<std::size_t>& set, double r,
             std::vector<std::size_t>* uncovered = nullptr) {
  std::vector<char> covered(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t i) {
    for (std::size_t j : set) {
      if (cloud.distance(i, j) <= r) {
        covered[i] = 1;
        return;
      }
    }
  });
  bool all = true;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!covered[i]) {
      all = false;
      if (uncovered) uncovered->push_back(i);
    }
  }
  return all;
}

std::string scale_note(const SensitivityContext& ctx) {
  std::ostringstream os;
  os << "(eps, r=" << ctx.r() << ", N=" << ctx.horizon().n() << ")-proxy on " << ctx.cloud().size() << " samples";
  return os.str();
}

Verdict make_verdict(const SensitivityContext& ctx, const std::vector<double>& grid, Property p) {
  Verdict v;
  v.property = p;
  v.epsilon_grid = grid;
  v.r = ctx.r();
  v.horizon = ctx.horizon().n();
  v.caveat = scale_note(ctx);
  return v;
}

}  // namespace

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("epsilon grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InputError("epsilon grid values must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) throw InputError("epsilon grid must be strictly descending");
  }
}

SensitivityContext::SensitivityContext(const System& sys, SampleCloud cloud, const Horizon& horizon, double r)
    : sys_(sys), cloud_(std::move(cloud)), horizon_(horizon) {
  const double radius = r > 0.0 ? r : cloud_.r;
  pairs_ = std::make_shared<const BallPairs>(cloud_, horizon_pseudometric(sys_, cloud_, horizon_), radius);
}

EqReport eq_epsilon(const SensitivityContext& ctx, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  EqReport rep;
  rep.epsilon = epsilon;
  rep.horizon = ctx.horizon().n();
  rep.r = ctx.r();
  rep.eq_points = eq_indices(ctx, epsilon);
  rep.dense = r_dense(ctx.cloud(), rep.eq_points, ctx.r());
  if (!rep.eq_points.empty()) {
    const SampleCloud& cloud = ctx.cloud();
    std::vector<char> fails(rep.eq_points.size(), 0);
    parallel_for(rep.eq_points.size(), [&](std::size_t k) {
      const Point image = ctx.system().forward(cloud[rep.eq_points[k]]);
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        const double d = ctx.system().distance(image, cloud[j]);
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      fails[k] = ctx.pairs().full_diameter(nearest) > epsilon;
    });
    rep.invariance_defect =
        static_cast<double>(std::count(fails.begin(), fails.end(), 1)) / static_cast<double>(rep.eq_points.size());
  }
  return rep;
}

std::string to_string(Property p) {
  switch (p) {
    case Property::ns: return "NS";
    case Property::sensitive: return "sensitive";
    case Property::ae: return "AE";
    case Property::not_ae: return "not-AE";
    case Property::le: return "LE";
    case Property::not_le: return "not-LE";
    case Property::hns: return "HNS";
    case Property::not_hns: return "not-HNS";
  }
  return "unknown";
}

Verdict ns_check(const SensitivityContext& ctx, const std::vector<double>& grid) {
  validate_grid(grid);
  for (double eps : grid) {
    if (eq_indices(ctx, eps).empty()) {
      Verdict v = make_verdict(ctx, grid, Property::sensitive);
      v.failing_epsilon = eps;
      for (std::size_t i = 0; i < ctx.cloud().size(); ++i) v.witness.push_back(i);
      return v;
    }
  }
  return make_verdict(ctx, grid, Property::ns);
}

double sensitivity_constant(const SensitivityContext& ctx, const std::vector<double>& grid) {
  validate_grid(grid);
  for (double eps : grid) {
    if (eq_indices(ctx, eps).empty()) return eps;
  }
  return 0.0;
}

Verdict ae_check(const SensitivityContext& ctx, const std::vector<double>& grid) {
  validate_grid(grid);
  std::vector<char> in_all(ctx.cloud().size(), 1);
  for (double eps : grid) {
    std::vector<char> in(ctx.cloud().size(), 0);
    for (std::size_t x : eq_indices(ctx, eps)) in[x] = 1;
    for (std::size_t x = 0; x < in.size(); ++x) in_all[x] = in_all[x] && in[x];
  }
  std::vector<std::size_t> eq;
  for (std::size_t x = 0; x < in_all.size(); ++x)
    if (in_all[x]) eq.push_back(x);
  std::vector<std::size_t> uncovered;
  const bool dense = r_dense(ctx.cloud(), eq, ctx.r(), &uncovered);
  Verdict v = make_verdict(ctx, grid, dense ? Property::ae : Property::not_ae);
  if (!dense) {
    v.failing_epsilon = grid.back();
    v.witness = std::move(uncovered);
  }
  return v;
}

Verdict le_check(const SensitivityContext& ctx, const std::vector<double>& grid, const LeOptions& options) {
  validate_grid(grid);
  const double radius = grid.back() * options.radius_fraction;
  const double merge = grid.back() * options.merge_fraction;
  const Horizon deep(ctx.horizon().n() * options.depth_factor);
  const SampleCloud& cloud = ctx.cloud();
  std::vector<double> diam(cloud.size(), 0.0);
  // Each x0 is tested inside its own orbit-closure sample, x0 first.
  parallel_for(cloud.size(), [&](std::size_t i) {
    const SampleCloud sub = orbit_closure_sample(ctx.system(), cloud[i], deep, merge);
    std::vector<std::size_t> ball;
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (sub.distance(0, j) <= radius) ball.push_back(j);
    double d = 0.0;
    for (std::size_t a = 0; a < ball.size(); ++a)
      for (std::size_t b = a + 1; b < ball.size(); ++b)
        d = std::max(d, d_H(ctx.system(), sub[ball[a]], sub[ball[b]], ctx.horizon()));
    diam[i] = d;
  });
  Verdict v = make_verdict(ctx, grid, Property::le);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (diam[i] > grid.back()) v.witness.push_back(i);
  }
  if (!v.witness.empty()) {
    v.property = Property::not_le;
    v.failing_epsilon = grid.back();
  }
  std::ostringstream os;
  os << v.caveat << "; orbit closures to N'=" << deep.n() << ", sub-cloud radius " << radius << ", merge " << merge;
  v.caveat = os.str();
  return v;
}

Verdict hns_check(const SensitivityContext& ctx, const std::vector<double>& grid) {
  validate_grid(grid);
  for (double eps : grid) {
    const auto rep = fragmentation_kernel(ctx.pairs(), eps);
    if (!rep.fragmented) {
      Verdict v = make_verdict(ctx, grid, Property::not_hns);
      v.failing_epsilon = eps;
      v.witness = rep.residual;
      return v;
    }
  }
  return make_verdict(ctx, grid, Property::hns);
}

bool local_fragmentation_check(const SensitivityContext& ctx, const std::vector<double>& grid) {
  validate_grid(grid);
  const auto& balls = ctx.pairs().balls();
  std::vector<char> ok(balls.size(), 1);
  parallel_for(balls.size(), [&](std::size_t x) {
    const auto& ball = balls[x];
    for (double eps : grid) {
      // Peel the ball's own points against balls restricted to it.
      std::vector<char> alive(ctx.cloud().size(), 0);
      for (std::size_t y : ball) alive[y] = 1;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t y : ball) {
          if (alive[y] && ctx.pairs().ball_diameter(y, alive) <= eps) {
            alive[y] = 0;
            changed = true;
          }
        }
      }
      for (std::size_t y : ball) {
        if (alive[y]) {
          ok[x] = 0;
          return;
        }
      }
    }
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

std::string to_string(WmOutcome o) {
  switch (o) {
    case WmOutcome::pass: return "pass";
    case WmOutcome::contradiction: return "contradiction";
    case WmOutcome::unknown: return "unknown";
  }
  return "unknown";
}

WmReport wm_triviality_test(const SensitivityContext& ctx, const std::vector<double>& grid, double delta) {
  WmReport rep;
  rep.ns = ns_check(ctx, grid).positive();
  const SampleCloud& cloud = ctx.cloud();
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j) rep.cloud_diameter = std::max(rep.cloud_diameter, cloud.distance(i, j));
  if (!rep.ns) {
    rep.outcome = WmOutcome::pass;
    rep.note = "sensitive at these scales; implication vacuous";
    return rep;
  }
  rep.weak_mixing = ctx.system().flags().weak_mixing_asserted
                        ? ProbeResult::transitive
                        : product_transitivity_probe(ctx.system(), cloud, delta, ctx.horizon());
  switch (rep.weak_mixing) {
    case ProbeResult::unknown:
      rep.outcome = WmOutcome::unknown;
      rep.note = "product probe inconclusive";
      break;
    case ProbeResult::not_transitive:
      rep.outcome = WmOutcome::pass;
      rep.note = "product probe not transitive; implication vacuous";
      break;
    case ProbeResult::transitive:
      rep.outcome = rep.cloud_diameter <= grid.front() ? WmOutcome::pass : WmOutcome::contradiction;
      rep.note = rep.outcome == WmOutcome::pass ? "NS and weakly mixing with trivial cloud"
                                                : "NS and weakly mixing but the cloud is not trivial";
      break;
  }
  return rep;
}

}  // namespace dynlab
