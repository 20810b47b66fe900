#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynlab/pseudometrics.hpp"
#include "dynlab/symbolic.hpp"

namespace dynlab {

/// A table x -> p(x) over a cloud with the iterates that merged into it.
struct ClusterMap {
  std::vector<Point> table;
  /// Exponents in merge order; the first is the representative (smallest |n|).
  std::vector<std::int64_t> exponents;
  double tol = 0.0;

  std::int64_t representative() const { return exponents.front(); }
  std::size_t multiplicity() const { return exponents.size(); }
};

struct EnvelopeApprox {
  std::vector<ClusterMap> maps;
  std::int64_t horizon = 0;
  double tol = 0.0;
};

/// sup over the cloud of d(a(x), b(x)).
double sup_distance(const AmbientSpace& space, const std::vector<Point>& a, const std::vector<Point>& b);

/// Tables x -> T^n x for n = 0, 1, -1, 2, -2, ... (raw iterates).
std::vector<std::vector<Point>> iterate_tables(const System& sys, const SampleCloud& cloud, const Horizon& horizon);

/// Iterate tables merged greedily in |n| order: a table joins the first
/// representative within sup-distance tol, otherwise it becomes one.
EnvelopeApprox envelope_approx(const System& sys, const SampleCloud& cloud, const Horizon& horizon, double tol);

struct RealTable {
  std::vector<double> values;
  std::vector<std::int64_t> exponents;
};

/// f applied to the envelope representatives, merged at sup tol.
std::vector<RealTable> ef_family(const EnvelopeApprox& env, const Observable& f, double tol);
std::vector<RealTable> ef_family(const System& sys, const Observable& f, const SampleCloud& cloud,
                                 const Horizon& horizon, double tol);

FragmentationReport fragmented_family_check(const std::vector<RealTable>& family, const SampleCloud& cloud,
                                            double epsilon, double r);
FragmentationReport fragmented_family_check(const std::vector<std::vector<Point>>& family, const SampleCloud& cloud,
                                            double epsilon, double r);

/// Kernel of the raw iterate family {T^n : |n| <= N} at each grid epsilon.
/// Orbits are stepped directly, so this is independent of any closed-form d_H.
std::vector<FragmentationReport> raw_family_check(const System& sys, const SampleCloud& cloud, const Horizon& horizon,
                                                  const std::vector<double>& epsilon_grid, double r);

/// max over x of diam(table(B(x,r) ∩ cloud)).
double continuity_defect(const ClusterMap& map, const SampleCloud& cloud, double r);

/// Kernel on the singleton family {map}: (epsilon, r)-fragmented.
FragmentationReport baire_class_proxy(const std::vector<Point>& table, const SampleCloud& cloud, double r,
                                      double epsilon);
FragmentationReport baire_class_proxy(const std::vector<double>& table, const SampleCloud& cloud, double r,
                                      double epsilon);

struct FSemigroupReport {
  bool fragmented = false;
  /// max sup-distance from a projected composition p∘q to the nearest envelope map.
  double closure_defect = 0.0;
  /// max distance from q(x) to its nearest cloud point.
  double projection_error = 0.0;
  bool degraded = false;
  std::vector<std::size_t> residual;
};

/// Left translations q -> p∘q over the envelope's maps, compared in the sup
/// metric; r is the sup-metric ball radius among maps.
FSemigroupReport f_semigroup_check(const EnvelopeApprox& env, const SampleCloud& cloud, double epsilon, double r);

struct TwoArrowsGammaRow {
  std::int64_t m = 0;
  double gamma = 0.0;
  std::vector<std::int64_t> below;
  std::vector<std::int64_t> above;
  /// sup-distance between the last two tables of each approach.
  double below_cauchy = 0.0;
  double above_cauchy = 0.0;
  /// sup-distance from each limit table to the predicted p^-/p^+ coding.
  double minus_error = 0.0;
  double plus_error = 0.0;
  double limits_distance = 0.0;
  /// circle error of the factor map against rotation by gamma on off-orbit samples.
  double factor_error = 0.0;
  bool limits_distinct = false;
  bool converged = false;
  bool baire_minus = false;
  bool baire_plus = false;
};

struct TwoArrowsReport {
  std::int64_t depth = 0;
  double tol = 0.0;
  std::int64_t shift_range = 0;
  double min_shift_distance = 0.0;
  double expansivity = 0.5;
  double baire_r = 0.0;
  double baire_epsilon = 0.5;
  std::vector<TwoArrowsGammaRow> rows;

  bool discrete() const { return min_shift_distance >= expansivity; }
  bool claims_hold() const;
};

/// gammas = m*alpha for the given m.
TwoArrowsReport verify_two_arrows(const ContinuedFraction& alpha, std::int64_t depth, double tol,
                                  const std::vector<std::int64_t>& ms = {-5, -4, -3, -2, -1, 0, 1, 2, 3, 4},
                                  std::int64_t shift_range = 200);

}  // namespace dynlab
