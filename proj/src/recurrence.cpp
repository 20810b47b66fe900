#include "dynlab/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynlab/pseudometrics.hpp"

namespace dynlab {
namespace {

// Orbit tables T^n x for n = -N..N, stored at offset n + N.
std::vector<std::vector<Point>> orbit_tables(const System& sys, const std::vector<Point>& pts, std::int64_t n) {
  std::vector<std::vector<Point>> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    auto seg = orbit_segment(sys, pts[i], Horizon(n));
    out[i].reserve(seg.size());
    for (auto& [k, p] : seg) out[i].push_back(p);
  });
  return out;
}

double distance_to_set(const AmbientSpace& space, const Point& p, const SampleCloud& cloud,
                       const std::vector<std::size_t>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : set) best = std::min(best, space.distance(p, cloud[j]));
  return best;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> ChainDigraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j : out[i]) e.emplace_back(i, j);
  return e;
}

ChainDigraph chain_digraph(const System& sys, const SampleCloud& cloud, double delta, bool two_sided) {
  if (!(delta > 0.0)) throw InputError("chain delta must be positive");
  ChainDigraph dg;
  dg.delta = delta;
  dg.two_sided = two_sided;
  dg.out.assign(cloud.size(), {});
  parallel_for(cloud.size(), [&](std::size_t i) {
    const Point fwd = sys.forward(cloud[i]);
    const Point bwd = two_sided ? sys.inverse(cloud[i]) : fwd;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (sys.distance(fwd, cloud[j]) <= delta || (two_sided && sys.distance(bwd, cloud[j]) <= delta)) {
        dg.out[i].push_back(j);
      }
    }
  });
  return dg;
}

std::vector<std::size_t> chain_recurrent_set(const ChainDigraph& dg) {
  int count = 0;
  const auto comp = strongly_connected_components(dg.out, count);
  std::vector<char> cyclic(static_cast<std::size_t>(count), 0);
  for (std::size_t v = 0; v < dg.size(); ++v)
    for (std::size_t w : dg.out[v])
      if (comp[w] == comp[v]) cyclic[static_cast<std::size_t>(comp[v])] = 1;
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < dg.size(); ++v)
    if (cyclic[static_cast<std::size_t>(comp[v])]) out.push_back(v);
  return out;
}

bool strongly_connected(const ChainDigraph& dg) {
  if (dg.size() == 0) return true;
  int count = 0;
  strongly_connected_components(dg.out, count);
  return count == 1;
}

BirkhoffResult birkhoff_center_iteration(const System& sys, const SampleCloud& cloud, double delta,
                                         const Horizon& horizon, int max_stages, double r) {
  if (max_stages < 1) throw InputError("max-stages must be at least 1");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  BirkhoffResult res;
  res.delta = delta;
  res.r = r > 0.0 ? r : cloud.r;
  res.horizon = horizon.n();
  const auto tables = orbit_tables(sys, cloud.points, horizon.n());
  const Neighborhoods balls = ball_neighborhoods(cloud, res.r);
  const std::int64_t n = horizon.n();

  std::vector<std::size_t> current(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) current[i] = i;
  res.stages.push_back(current);
  for (int stage = 0; stage < max_stages; ++stage) {
    std::vector<char> alive(cloud.size(), 0);
    for (std::size_t i : current) alive[i] = 1;
    std::vector<char> keep(current.size(), 0);
    parallel_for(current.size(), [&](std::size_t k) {
      const std::size_t x = current[k];
      std::vector<std::size_t> ball;
      for (std::size_t y : balls[x])
        if (alive[y]) ball.push_back(y);
      for (std::size_t y : ball) {
        for (std::int64_t j = -n; j <= n; ++j) {
          if (j == 0) continue;
          if (distance_to_set(sys.space(), tables[y][static_cast<std::size_t>(j + n)], cloud, ball) <= delta) {
            keep[k] = 1;
            return;
          }
        }
      }
    });
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < current.size(); ++k)
      if (keep[k]) next.push_back(current[k]);
    if (next == current) {
      res.fixpoint = true;
      break;
    }
    current = std::move(next);
    res.stages.push_back(current);
  }
  return res;
}

ProlongationReport prolongation(const System& sys, const SampleCloud& cloud, std::size_t x, double delta,
                                const Horizon& horizon) {
  if (x >= cloud.size()) throw InputError("prolongation base is not a cloud index");
  ProlongationReport rep;
  rep.base = x;
  rep.delta = delta;
  rep.horizon = horizon.n();
  std::vector<Point> near;
  for (std::size_t j = 0; j < cloud.size(); ++j)
    if (cloud.distance(x, j) <= delta) near.push_back(cloud[j]);
  const auto tables = orbit_tables(sys, near, horizon.n());
  std::vector<char> in(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t y) {
    for (const auto& table : tables) {
      for (const Point& p : table) {
        if (sys.distance(p, cloud[y]) <= delta) {
          in[y] = 1;
          return;
        }
      }
    }
  });
  for (std::size_t y = 0; y < cloud.size(); ++y)
    if (in[y]) rep.prol_set.push_back(y);
  return rep;
}

PropertyResult lem1_check(const System& sys, const SampleCloud& cloud, double delta, const Horizon& horizon,
                          const std::vector<std::size_t>& eq_points) {
  PropertyResult res;
  for (std::size_t x0 : eq_points) {
    ++res.tested;
    const auto prol = prolongation(sys, cloud, x0, delta, horizon);
    const auto seg = orbit_segment(sys, cloud[x0], horizon);
    for (std::size_t y : prol.prol_set) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [k, p] : seg) best = std::min(best, sys.distance(p, cloud[y]));
      if (best > 2.0 * delta) {
        res.passed = false;
        res.violations.push_back("x0=" + std::to_string(x0) + " reaches " + std::to_string(y) + " at distance " +
                                 std::to_string(best) + " from its orbit");
      }
    }
  }
  return res;
}

CapturingResult capturing_check(const System& sys, const SampleCloud& cloud, const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b, const Horizon& horizon, double delta) {
  std::vector<char> in_a(cloud.size(), 0), in_b(cloud.size(), 0);
  for (std::size_t i : a) in_a[i] = 1;
  for (std::size_t i : b) in_b[i] = 1;
  for (std::size_t i : a) {
    if (!in_b[i]) throw PreconditionError("capturing_check requires A to be a subset of B");
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i : b)
    if (!in_a[i]) candidates.push_back(i);
  std::vector<char> bad(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t k) {
    for (const auto& [n, p] : orbit_segment(sys, cloud[candidates[k]], horizon)) {
      if (distance_to_set(sys.space(), p, cloud, a) <= delta) {
        bad[k] = 1;
        return;
      }
    }
  });
  CapturingResult res;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (bad[k]) res.violators.push_back(candidates[k]);
  res.capturing = res.violators.empty();
  return res;
}

MincenterResult mincenter_approx(const System& sys, const SampleCloud& cloud, double delta, const Horizon& horizon,
                                 std::int64_t gap_bound) {
  MincenterResult res;
  res.delta = delta;
  res.horizon = horizon.n();
  res.gap_bound = gap_bound > 0 ? gap_bound : (horizon.n() + 3) / 4;
  const ChainDigraph dg = chain_digraph(sys, cloud, delta);
  const auto recurrent = chain_recurrent_set(dg);
  std::vector<char> is_rec(cloud.size(), 0);
  for (std::size_t v : recurrent) is_rec[v] = 1;
  Adjacency sub(cloud.size());
  for (std::size_t v : recurrent)
    for (std::size_t w : dg.out[v])
      if (is_rec[w]) sub[v].push_back(w);
  int count = 0;
  const auto comp = strongly_connected_components(sub, count);

  // Syndetic delta-returns with gaps <= gap_bound over 1..N.
  std::vector<char> syndetic(cloud.size(), 0);
  const std::int64_t n = horizon.n();
  parallel_for(recurrent.size(), [&](std::size_t k) {
    const std::size_t v = recurrent[k];
    std::int64_t last = 0;
    Point p = cloud[v];
    for (std::int64_t j = 1; j <= n; ++j) {
      p = sys.forward(p);
      if (sys.distance(p, cloud[v]) <= delta) {
        if (j - last > res.gap_bound) return;
        last = j;
      }
    }
    syndetic[v] = n - last <= res.gap_bound;
  });

  std::vector<int> order;
  std::vector<int> slot(static_cast<std::size_t>(count), -1);
  for (std::size_t v : recurrent) {
    const int c = comp[v];
    if (slot[static_cast<std::size_t>(c)] < 0) {
      slot[static_cast<std::size_t>(c)] = static_cast<int>(res.components.size());
      res.components.push_back({{}, true});
    }
    auto& mc = res.components[static_cast<std::size_t>(slot[static_cast<std::size_t>(c)])];
    mc.nodes.push_back(v);
    mc.minimal = mc.minimal && syndetic[v];
  }
  for (const auto& mc : res.components)
    if (mc.minimal) res.mincenter.insert(res.mincenter.end(), mc.nodes.begin(), mc.nodes.end());
  std::sort(res.mincenter.begin(), res.mincenter.end());
  return res;
}

std::string to_string(ProbeResult r) {
  switch (r) {
    case ProbeResult::transitive: return "transitive";
    case ProbeResult::not_transitive: return "not-transitive";
    case ProbeResult::unknown: return "unknown";
  }
  return "unknown";
}

ProbeResult product_transitivity_probe(const System& sys, const SampleCloud& cloud, double delta,
                                       const Horizon& horizon) {
  constexpr std::size_t kMaxCenters = 64;
  constexpr std::size_t kMaxSamples = 256;
  if (cloud.size() == 0) return ProbeResult::unknown;
  const auto centers = eps_net(cloud.size(), ambient_pseudometric(cloud), delta);
  if (centers.size() > kMaxCenters) return ProbeResult::unknown;
  const std::size_t cells = centers.size();
  auto cell_of = [&](const Point& p) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cells; ++c) {
      const double d = sys.distance(p, cloud[centers[c]]);
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    return best;
  };

  // Uniform-stride subsample, always keeping the centers.
  std::vector<std::size_t> samples(centers.begin(), centers.end());
  const std::size_t stride = std::max<std::size_t>(1, cloud.size() / kMaxSamples);
  for (std::size_t i = 0; i < cloud.size(); i += stride) samples.push_back(i);
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  const std::int64_t n = horizon.n();
  const auto width = static_cast<std::size_t>(2 * n + 1);
  std::vector<std::vector<std::size_t>> cell_table(samples.size(), std::vector<std::size_t>(width));
  parallel_for(samples.size(), [&](std::size_t s) {
    const auto seg = orbit_segment(sys, cloud[samples[s]], horizon);
    for (std::size_t k = 0; k < width; ++k) cell_table[s][k] = cell_of(seg[k].second);
  });

  std::vector<std::vector<std::size_t>> members(cells);
  for (std::size_t s = 0; s < samples.size(); ++s) members[cell_table[s][static_cast<std::size_t>(n)]].push_back(s);

  const std::size_t nodes = cells * cells;
  std::vector<std::vector<char>> reach(nodes, std::vector<char>(nodes, 0));
  parallel_for(nodes, [&](std::size_t from) {
    auto& row = reach[from];
    for (std::size_t s : members[from / cells]) {
      for (std::size_t t : members[from % cells]) {
        for (std::size_t k = 0; k < width; ++k) {
          if (k != static_cast<std::size_t>(n)) row[cell_table[s][k] * cells + cell_table[t][k]] = 1;
        }
      }
    }
  });
  for (const auto& row : reach)
    for (char v : row)
      if (!v) return ProbeResult::not_transitive;
  return ProbeResult::transitive;
}

bool chain_transitivity_probe(const System& sys, const SampleCloud& cloud, double delta) {
  return strongly_connected(chain_digraph(sys, cloud, delta, true));
}

bool is_transitive_point(const System& sys, const SampleCloud& cloud, const Point& x, double delta,
                         const Horizon& horizon) {
  const auto seg = orbit_segment(sys, x, horizon);
  std::vector<char> hit(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t j) {
    for (const auto& [k, p] : seg) {
      if (sys.distance(p, cloud[j]) <= delta) {
        hit[j] = 1;
        return;
      }
    }
  });
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

}  // namespace dynlab
