#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynlab/pseudometrics.hpp"
#include "dynlab/recurrence.hpp"

namespace dynlab {

/// Everything the verdicts share at one (cloud, r, N): balls and the d_H
/// values of every pair sharing a ball.
class SensitivityContext {
 public:
  SensitivityContext(const System& sys, SampleCloud cloud, const Horizon& horizon, double r = -1.0);

  const System& system() const { return sys_; }
  const SampleCloud& cloud() const { return cloud_; }
  const Horizon& horizon() const { return horizon_; }
  double r() const { return pairs_->r(); }
  const BallPairs& pairs() const { return *pairs_; }

 private:
  System sys_;
  SampleCloud cloud_;
  Horizon horizon_;
  std::shared_ptr<const BallPairs> pairs_;
};

struct EqReport {
  double epsilon = 0.0;
  std::int64_t horizon = 0;
  double r = 0.0;
  std::vector<std::size_t> eq_points;
  bool dense = false;
  /// Fraction of eq-points whose T-image's nearest cloud point fails the test.
  double invariance_defect = 0.0;
};

EqReport eq_epsilon(const SensitivityContext& ctx, double epsilon);

enum class Property { ns, sensitive, ae, not_ae, le, not_le, hns, not_hns };

std::string to_string(Property p);

struct Verdict {
  Property property = Property::ns;
  std::vector<double> epsilon_grid;
  double r = 0.0;
  std::int64_t horizon = 0;
  std::optional<double> failing_epsilon;
  std::vector<std::size_t> witness;
  std::string caveat;

  bool positive() const {
    return property == Property::ns || property == Property::ae || property == Property::le || property == Property::hns;
  }
};

/// NS iff Eq_eps is nonempty for every grid epsilon.
Verdict ns_check(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid);

/// Largest grid epsilon with empty Eq_eps; 0 when there is none.
double sensitivity_constant(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid);

/// AE iff the intersection of the Eq_eps over the grid is r-dense in the cloud.
Verdict ae_check(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid);

struct LeOptions {
  /// Orbit-closure horizon as a multiple of the analysis horizon.
  std::int64_t depth_factor = 4;
  /// Sub-cloud ball radius and merge tolerance as fractions of the smallest grid epsilon.
  double radius_fraction = 0.5;
  double merge_fraction = 0.25;
};

/// Every sampled x0 is an equicontinuity point of its own orbit-closure sample.
Verdict le_check(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid, const LeOptions& options = {});

/// HNS iff the d_H fragmentation kernel leaves no residual at any grid epsilon.
Verdict hns_check(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid);

/// The kernel restricted to each ball (local fragmentation) at every grid epsilon.
bool local_fragmentation_check(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid);

enum class WmOutcome { pass, contradiction, unknown };

std::string to_string(WmOutcome o);

struct WmReport {
  WmOutcome outcome = WmOutcome::unknown;
  bool ns = false;
  ProbeResult weak_mixing = ProbeResult::unknown;
  double cloud_diameter = 0.0;
  std::string note;
};

/// A weakly mixing NS system is trivial: NS plus a transitive product probe
/// (or the weak-mixing flag) must leave a cloud of diameter <= max grid epsilon.
WmReport wm_triviality_test(const SensitivityContext& ctx, const std::vector<double>& epsilon_grid, double delta);

void validate_grid(const std::vector<double>& epsilon_grid);

}  // namespace dynlab
