#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynlab/graph.hpp"
#include "dynlab/spaces.hpp"

namespace dynlab {

/// x -> y iff d(T x, y) <= delta (and, when two-sided, also iff d(T^-1 x, y) <= delta).
struct ChainDigraph {
  double delta = 0.0;
  bool two_sided = false;
  Adjacency out;

  std::size_t size() const { return out.size(); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
};

ChainDigraph chain_digraph(const System& sys, const SampleCloud& cloud, double delta, bool two_sided = false);

/// Nodes whose strongly connected component carries a cycle (self-loops included).
std::vector<std::size_t> chain_recurrent_set(const ChainDigraph& dg);

bool strongly_connected(const ChainDigraph& dg);

struct BirkhoffResult {
  double delta = 0.0;
  double r = 0.0;
  std::int64_t horizon = 0;
  std::vector<std::vector<std::size_t>> stages;
  bool fixpoint = false;

  const std::vector<std::size_t>& final_set() const { return stages.back(); }
};

/// Repeatedly removes nodes whose ball B(x,r) within the current set is
/// wandering: every T^j image (1 <= |j| <= N) of the ball stays > delta from it.
BirkhoffResult birkhoff_center_iteration(const System& sys, const SampleCloud& cloud, double delta,
                                         const Horizon& horizon, int max_stages = 32, double r = -1.0);

struct ProlongationReport {
  std::size_t base = 0;
  std::vector<std::size_t> prol_set;
  double delta = 0.0;
  std::int64_t horizon = 0;
};

ProlongationReport prolongation(const System& sys, const SampleCloud& cloud, std::size_t x, double delta,
                                const Horizon& horizon);

struct PropertyResult {
  bool passed = true;
  std::size_t tested = 0;
  std::vector<std::string> violations;
};

/// For each x0 in `eq_points`: Prol[x0] lies within 2*delta of the orbit segment of x0.
PropertyResult lem1_check(const System& sys, const SampleCloud& cloud, double delta, const Horizon& horizon,
                          const std::vector<std::size_t>& eq_points);

struct CapturingResult {
  bool capturing = true;
  std::vector<std::size_t> violators;
};

/// A is capturing in B when no x in B \ A has an orbit segment entering the delta-fattening of A.
CapturingResult capturing_check(const System& sys, const SampleCloud& cloud, const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b, const Horizon& horizon, double delta);

struct MinimalComponent {
  std::vector<std::size_t> nodes;
  bool minimal = false;
};

struct MincenterResult {
  double delta = 0.0;
  std::int64_t horizon = 0;
  std::int64_t gap_bound = 0;
  std::vector<MinimalComponent> components;
  std::vector<std::size_t> mincenter;
};

/// gap_bound <= 0 selects ceil(N/4).
MincenterResult mincenter_approx(const System& sys, const SampleCloud& cloud, double delta, const Horizon& horizon,
                                 std::int64_t gap_bound = 0);

enum class ProbeResult { transitive, not_transitive, unknown };

std::string to_string(ProbeResult r);

/// Transitivity of T x T on pairs of cells: cells are a delta-net of the
/// cloud (at most 64 centers, else unknown); a product cell reaches another
/// when some sample pair lands there under a common T^n, 1 <= |n| <= N.
ProbeResult product_transitivity_probe(const System& sys, const SampleCloud& cloud, double delta,
                                       const Horizon& horizon);

/// Strong connectivity of the two-sided delta-chain digraph.
bool chain_transitivity_probe(const System& sys, const SampleCloud& cloud, double delta);

/// Orbit segment of x is delta-dense in the cloud.
bool is_transitive_point(const System& sys, const SampleCloud& cloud, const Point& x, double delta,
                         const Horizon& horizon);

}  // namespace dynlab
