#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynlab/spaces.hpp"

namespace dynlab {

/// A real observable f: X -> R with a declared sup-norm bound.
struct Observable {
  std::string label;
  std::function<double(const Point&)> fn;
  double sup_norm = 0.0;
  std::optional<double> lipschitz;

  double operator()(const Point& p) const { return fn(p); }
};

/// Rejects observables without a finite sup-norm bound.
Observable make_observable(std::string label, std::function<double(const Point&)> fn, double sup_norm,
                           std::optional<double> lipschitz = std::nullopt);

/// max_{|n|<=N} d(T^n x, T^n y).
double d_H(const System& sys, const Point& x, const Point& y, const Horizon& horizon);

/// max_{|n|<=N} |f(T^n x) - f(T^n y)|.
double rho_Hf(const System& sys, const Observable& f, const Point& x, const Point& y, const Horizon& horizon);

/// A pseudometric on the indices of a fixed cloud.
struct Pseudometric {
  std::string label;
  std::function<double(std::size_t, std::size_t)> eval;

  double operator()(std::size_t i, std::size_t j) const { return i == j ? 0.0 : eval(i, j); }
};

Pseudometric ambient_pseudometric(const SampleCloud& cloud);
Pseudometric horizon_pseudometric(const System& sys, const SampleCloud& cloud, const Horizon& horizon);
Pseudometric observable_pseudometric(const System& sys, const Observable& f, const SampleCloud& cloud,
                                     const Horizon& horizon);

/// rho(i,j) = sup over tables of |t[i] - t[j]|. Every table must have one entry per cloud point.
Pseudometric family_sup_pseudometric(std::vector<std::vector<double>> tables, std::size_t cloud_size);

/// rho(i,j) = sup over tables of d(t[i], t[j]) for point-valued tables.
Pseudometric point_family_pseudometric(SpacePtr space, std::vector<std::vector<Point>> tables,
                                       std::size_t cloud_size);

/// Greedy farthest-point net seeded at index 0. Returns center indices.
std::vector<std::size_t> eps_net(std::size_t cloud_size, const Pseudometric& rho, double epsilon);

struct SeparabilityRow {
  std::int64_t horizon = 0;
  double epsilon = 0.0;
  std::size_t cloud_size = 0;
  std::size_t net_size = 0;
};

struct SeparabilityProfile {
  std::string label;
  std::vector<SeparabilityRow> rows;
};

struct ScheduleEntry {
  SampleCloud cloud;
  Horizon horizon{0};
};

/// Net sizes of d_H (or rho_{H,f} when `f` is given) along a schedule. Descriptive only.
SeparabilityProfile separability_profile(const System& sys, const std::vector<ScheduleEntry>& schedule,
                                         double epsilon, const Observable* f = nullptr);

/// Balls of one radius over a cloud together with the pseudometric values of
/// every pair that shares a ball. Reusable across epsilon values.
class BallPairs {
 public:
  BallPairs(const SampleCloud& cloud, const Pseudometric& rho, double r);

  std::size_t size() const { return balls_.size(); }
  double r() const { return r_; }
  const std::string& label() const { return label_; }
  const Neighborhoods& balls() const { return balls_; }
  /// rho between two members of a common ball.
  double value(std::size_t i, std::size_t j) const;
  /// rho-diameter of B(x,r) restricted to the members flagged alive.
  double ball_diameter(std::size_t x, const std::vector<char>& alive) const;
  /// rho-diameter of B(x,r) within the whole cloud.
  double full_diameter(std::size_t x) const { return full_diameter_[x]; }

 private:
  std::string label_;
  double r_;
  Neighborhoods balls_;
  std::vector<std::uint64_t> pair_keys_;
  std::vector<double> pair_values_;
  std::vector<double> full_diameter_;
};

struct FragmentationReport {
  double epsilon = 0.0;
  double r = 0.0;
  std::string label;
  bool fragmented = false;
  /// Stage at which each point was peeled (1-based); 0 for residual points.
  std::vector<int> ranks;
  std::vector<std::size_t> residual;
  int stages = 0;
};

FragmentationReport fragmentation_kernel(const BallPairs& pairs, double epsilon);
FragmentationReport fragmentation_kernel(const SampleCloud& cloud, const Pseudometric& rho, double epsilon, double r);

/// Replays the peeling in rank order and confirms each peeled point was
/// epsilon-small among the points still present.
bool replay_ranks(const BallPairs& pairs, const FragmentationReport& report);

inline constexpr double kNoFragmentation = std::numeric_limits<double>::infinity();

/// Smallest grid epsilon at which the cloud is (epsilon, r)-fragmented; +inf if none.
double fragmentation_defect(const BallPairs& pairs, const std::vector<double>& epsilon_grid);

}  // namespace dynlab
