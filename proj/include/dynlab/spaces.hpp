#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynlab/core.hpp"

namespace dynlab {

enum class SpaceKind { circle, torus2, interval, disk, sequence, suspension, finite };

std::string to_string(SpaceKind kind);

/// A compact metric phase space. Implementations are immutable.
class AmbientSpace {
 public:
  virtual ~AmbientSpace() = default;
  virtual SpaceKind kind() const = 0;
  virtual double distance(const Point& a, const Point& b) const = 0;
  virtual bool contains(const Point& p) const = 0;
  virtual double diameter() const = 0;
  virtual std::string metric_descriptor() const = 0;
};

using SpacePtr = std::shared_ptr<const AmbientSpace>;

/// Arc distance on R/Z (total length 1).
double circle_distance(double a, double b);

class CircleSpace final : public AmbientSpace {
 public:
  SpaceKind kind() const override { return SpaceKind::circle; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return 0.5; }
  std::string metric_descriptor() const override { return "arc distance on R/Z, total length 1"; }
};

class Torus2Space final : public AmbientSpace {
 public:
  SpaceKind kind() const override { return SpaceKind::torus2; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return 0.5; }
  std::string metric_descriptor() const override { return "max of coordinate arc distances on (R/Z)^2"; }
};

class IntervalSpace final : public AmbientSpace {
 public:
  SpaceKind kind() const override { return SpaceKind::interval; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return 1.0; }
  std::string metric_descriptor() const override { return "absolute difference on [0,1]"; }
};

class DiskSpace final : public AmbientSpace {
 public:
  SpaceKind kind() const override { return SpaceKind::disk; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return 2.0; }
  std::string metric_descriptor() const override { return "Euclidean distance on the closed unit disk"; }
};

/// A bi-infinite symbol sequence n -> symbol.
class SymbolSource {
 public:
  virtual ~SymbolSource() = default;
  virtual int at(std::int64_t position) const = 0;
  virtual std::string describe() const = 0;
};

using SourcePtr = std::shared_ptr<const SymbolSource>;

/// The sequence w^infinity (w repeated in both directions, w[0] at position 0).
class PeriodicWordSource final : public SymbolSource {
 public:
  explicit PeriodicWordSource(std::string word);
  int at(std::int64_t position) const override;
  std::string describe() const override { return "periodic(" + word_ + ")"; }
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class FunctionSource final : public SymbolSource {
 public:
  FunctionSource(std::function<int(std::int64_t)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {}
  int at(std::int64_t position) const override { return fn_(position); }
  std::string describe() const override { return label_; }

 private:
  std::function<int(std::int64_t)> fn_;
  std::string label_;
};

/// Sequence space S^Z with d(x,y) = 2^-min{|k| : x_k != y_k}.
///
/// Points refer to registered sources. Differences are searched up to
/// |k| <= window; sequences agreeing on that window are at distance 0.
class SequenceSpace final : public AmbientSpace {
 public:
  SequenceSpace(int alphabet, int window, std::vector<SourcePtr> sources);

  SpaceKind kind() const override { return SpaceKind::sequence; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return 1.0; }
  std::string metric_descriptor() const override;

  int symbol(const Point& p, std::int64_t k) const;
  /// Smallest |k| <= limit with differing symbols, if any.
  std::optional<std::int64_t> first_difference(const Point& a, const Point& b, std::int64_t limit) const;
  int alphabet() const { return alphabet_; }
  int window() const { return window_; }
  const std::vector<SourcePtr>& sources() const { return sources_; }
  std::string window_string(const Point& p, std::int64_t half_width) const;

 private:
  int alphabet_;
  int window_;
  std::vector<SourcePtr> sources_;
};

/// Takens-style suspension data: a pseudo-orbit n -> x_n in a base space and
/// heights t_n in (0,1) (circle coordinate, 0 identified with 1).
struct ArcData {
  std::function<Point(std::int64_t)> state;
  std::function<double(std::int64_t)> height;
};

/// Y = X u {(x_n, t_n)} with metric max(d_X, circle distance of heights),
/// base points having height 0.
class SuspensionSpace final : public AmbientSpace {
 public:
  SuspensionSpace(SpacePtr base, ArcData arc);
  SpaceKind kind() const override { return SpaceKind::suspension; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return std::max(base_->diameter(), 0.5); }
  std::string metric_descriptor() const override;

  const SpacePtr& base() const { return base_; }
  Point base_part(const Point& p) const;
  double height(const Point& p) const;

 private:
  SpacePtr base_;
  ArcData arc_;
};

/// A finite metric (or pseudometric) space given by its distance matrix;
/// point i is represented by Point{index = i}.
class FiniteMetricSpace final : public AmbientSpace {
 public:
  explicit FiniteMetricSpace(std::vector<std::vector<double>> distances, std::string label = "finite");
  SpaceKind kind() const override { return SpaceKind::finite; }
  double distance(const Point& a, const Point& b) const override;
  bool contains(const Point& p) const override;
  double diameter() const override { return diameter_; }
  std::string metric_descriptor() const override { return label_; }
  std::size_t size() const { return d_.size(); }
  /// The cloud of all points with the given resolution radius.
  std::vector<Point> points() const;

 private:
  std::vector<std::vector<double>> d_;
  std::string label_;
  double diameter_ = 0.0;
};

struct SystemFlags {
  bool isometry = false;
  bool weak_mixing_asserted = false;
};

using MapFn = std::function<Point(const Point&)>;
using IterateFn = std::function<Point(const Point&, std::int64_t)>;

/// An invertible cascade (T, X): a homeomorphism and its inverse.
class System {
 public:
  System(std::string name, SpacePtr space, MapFn forward, MapFn inverse, SystemFlags flags = {},
         IterateFn iterate = {});

  const std::string& name() const { return name_; }
  const AmbientSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SystemFlags& flags() const { return flags_; }

  Point forward(const Point& p) const { return forward_(p); }
  Point inverse(const Point& p) const { return inverse_(p); }
  /// T^n p for any integer n.
  Point iterate(const Point& p, std::int64_t n) const;
  double distance(const Point& a, const Point& b) const { return space_->distance(a, b); }

  /// Optional closed form for max_{|n|<=N} d(T^n a, T^n b).
  using HorizonDistanceFn = std::function<double(const Point&, const Point&, std::int64_t)>;
  void set_horizon_distance(HorizonDistanceFn fn) { horizon_distance_ = std::move(fn); }
  const HorizonDistanceFn& horizon_distance_fn() const { return horizon_distance_; }

  /// Free-form parameter echo for reports.
  std::string description;

 private:
  std::string name_;
  SpacePtr space_;
  MapFn forward_;
  MapFn inverse_;
  SystemFlags flags_;
  IterateFn iterate_;
  HorizonDistanceFn horizon_distance_;
};

enum class ProvenanceKind { grid, orbit_closure, explicit_points };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::explicit_points;
  std::optional<Point> seed;
  std::int64_t horizon = 0;
  std::string note;
};

/// A finite sample of a space with a resolution radius r.
struct SampleCloud {
  std::vector<Point> points;
  SpacePtr space;
  double r = 0.0;
  Provenance provenance;

  std::size_t size() const { return points.size(); }
  const Point& operator[](std::size_t i) const { return points[i]; }
  double distance(std::size_t i, std::size_t j) const { return space->distance(points[i], points[j]); }
  /// Copy with a different resolution radius (must be > 0).
  SampleCloud with_radius(double radius) const;
};

/// Builds a cloud from explicit points, merging exact duplicates.
SampleCloud make_cloud(SpacePtr space, std::vector<Point> points, double r, Provenance provenance = {});

/// For every cloud point, indices of cloud points within distance r (inclusive), sorted.
using Neighborhoods = std::vector<std::vector<std::size_t>>;
Neighborhoods ball_neighborhoods(const SampleCloud& cloud, double r);

/// Deterministic quasi-uniform grid with r equal to the covering radius
/// (half the maximal nearest-neighbour gap on circle, interval and torus;
/// h*sqrt(2) for the Cartesian disk grid). Sequence and suspension spaces are
/// sampled through orbit_closure_sample / takens_cloud instead.
SampleCloud sample_space(SpacePtr space, int density);

/// Closed-form covering check: sup over a dense probe set of the distance to the cloud.
double probe_covering_radius(const SampleCloud& cloud, int probes_per_axis);

std::vector<std::pair<std::int64_t, Point>> orbit_segment(const System& sys, const Point& x, const Horizon& horizon);

SampleCloud orbit_closure_sample(const System& sys, const Point& x, const Horizon& horizon, double merge_tol);

/// Merges points closer than tol (greedy in order; first occurrence kept).
std::vector<Point> merge_points(const AmbientSpace& space, const std::vector<Point>& points, double tol);

// ---------------------------------------------------------------------------
// Gallery

/// Interval homeomorphism fixing 0 and 1: either x^power or a strictly
/// increasing piecewise-linear map through the given knots.
struct IntervalHomeoSpec {
  double power = 2.0;
  std::vector<std::pair<double, double>> knots;
};

System make_rotation(double alpha);
System make_toral_automorphism(const std::array<std::array<long long, 2>, 2>& matrix, bool require_hyperbolic = false);
System make_interval_homeo(const IntervalHomeoSpec& spec = {});
System make_circle_homeo(double alpha, double beta);
System make_disk_twist();
/// `count` fixed points at mutual distance 1 (identity map).
System make_fixed_points(std::size_t count);

/// Default t-sequence t_n = arctan(n)/pi + 1/2.
double default_takens_height(std::int64_t n);

struct TakensOptions {
  std::function<double(std::int64_t)> height = default_takens_height;
  double pseudo_orbit_tol = 1e-9;
  /// Number of consecutive indices at each end of the supplied range on which
  /// d(T x_n, x_{n+1}) must be within pseudo_orbit_tol.
  std::int64_t tail_check = 2;
};

/// Suspension of the pseudo-orbit states[0..] (indices first_index, first_index+1, ...)
/// over `base`. Outside the supplied range the pseudo-orbit continues as the
/// true orbit of the end states.
System takens_suspension(const std::vector<Point>& states, std::int64_t first_index, const System& base,
                         const TakensOptions& options = {});

/// Sample of a suspension: the given base points plus arc states |n| <= depth.
/// r is half the maximal nearest-neighbour gap, as for grids.
SampleCloud takens_cloud(const System& suspension, const std::vector<Point>& base_points, std::int64_t depth);

}  // namespace dynlab
