#include "dynlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace dynlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double v) {
  double w = v - std::floor(v);
  if (w >= 1.0) w = 0.0;
  return w;
}

long double wrap_unit_long(long double v) {
  long double w = v - std::floor(v);
  if (w >= 1.0L) w = 0.0L;
  return w;
}

void require_finite(const Point& p, const std::string& what) {
  if (!std::isfinite(p.x[0]) || !std::isfinite(p.x[1])) {
    throw NumericError(what + ": coordinates left the representable range");
  }
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::circle: return "circle";
    case SpaceKind::torus2: return "torus2";
    case SpaceKind::interval: return "interval";
    case SpaceKind::disk: return "disk";
    case SpaceKind::sequence: return "sequence-space";
    case SpaceKind::suspension: return "suspension";
    case SpaceKind::finite: return "finite";
  }
  return "unknown";
}

double circle_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

double CircleSpace::distance(const Point& a, const Point& b) const { return circle_distance(a.x[0], b.x[0]); }

bool CircleSpace::contains(const Point& p) const { return p.x[0] >= 0.0 && p.x[0] < 1.0; }

double Torus2Space::distance(const Point& a, const Point& b) const {
  return std::max(circle_distance(a.x[0], b.x[0]), circle_distance(a.x[1], b.x[1]));
}

bool Torus2Space::contains(const Point& p) const {
  return p.x[0] >= 0.0 && p.x[0] < 1.0 && p.x[1] >= 0.0 && p.x[1] < 1.0;
}

double IntervalSpace::distance(const Point& a, const Point& b) const { return std::fabs(a.x[0] - b.x[0]); }

bool IntervalSpace::contains(const Point& p) const { return p.x[0] >= 0.0 && p.x[0] <= 1.0; }

double DiskSpace::distance(const Point& a, const Point& b) const {
  return std::hypot(a.x[0] - b.x[0], a.x[1] - b.x[1]);
}

bool DiskSpace::contains(const Point& p) const { return std::hypot(p.x[0], p.x[1]) <= 1.0 + 1e-12; }

PeriodicWordSource::PeriodicWordSource(std::string word) : word_(std::move(word)) {
  if (word_.empty()) throw InputError("periodic word must be nonempty");
}

int PeriodicWordSource::at(std::int64_t position) const {
  const auto p = static_cast<std::int64_t>(word_.size());
  std::int64_t k = position % p;
  if (k < 0) k += p;
  return word_[static_cast<std::size_t>(k)] - '0';
}

SequenceSpace::SequenceSpace(int alphabet, int window, std::vector<SourcePtr> sources)
    : alphabet_(alphabet), window_(window), sources_(std::move(sources)) {
  if (alphabet_ < 1 || alphabet_ > 10) throw InputError("alphabet size must be in 1..10");
  if (window_ < 1 || window_ > 1000) throw InputError("sequence metric window must be in 1..1000");
  if (sources_.empty()) throw InputError("sequence space needs at least one symbol source");
}

int SequenceSpace::symbol(const Point& p, std::int64_t k) const {
  return sources_[static_cast<std::size_t>(p.source)]->at(p.index + k);
}

std::optional<std::int64_t> SequenceSpace::first_difference(const Point& a, const Point& b,
                                                            std::int64_t limit) const {
  if (a.source == b.source && a.index == b.index) return std::nullopt;
  const SymbolSource& sa = *sources_[static_cast<std::size_t>(a.source)];
  const SymbolSource& sb = *sources_[static_cast<std::size_t>(b.source)];
  if (sa.at(a.index) != sb.at(b.index)) return 0;
  for (std::int64_t k = 1; k <= limit; ++k) {
    if (sa.at(a.index + k) != sb.at(b.index + k) || sa.at(a.index - k) != sb.at(b.index - k)) return k;
  }
  return std::nullopt;
}

double SequenceSpace::distance(const Point& a, const Point& b) const {
  const auto k = first_difference(a, b, window_);
  return k ? std::ldexp(1.0, -static_cast<int>(*k)) : 0.0;
}

bool SequenceSpace::contains(const Point& p) const {
  return p.source >= 0 && static_cast<std::size_t>(p.source) < sources_.size();
}

std::string SequenceSpace::metric_descriptor() const {
  std::ostringstream os;
  os << "2^-min{|k| : x_k != y_k} on " << alphabet_ << "-symbol sequences, differences searched to |k| <= "
     << window_;
  return os.str();
}

std::string SequenceSpace::window_string(const Point& p, std::int64_t half_width) const {
  std::string s;
  s.reserve(static_cast<std::size_t>(2 * half_width + 1));
  for (std::int64_t k = -half_width; k <= half_width; ++k) s.push_back(static_cast<char>('0' + symbol(p, k)));
  return s;
}

SuspensionSpace::SuspensionSpace(SpacePtr base, ArcData arc) : base_(std::move(base)), arc_(std::move(arc)) {}

Point SuspensionSpace::base_part(const Point& p) const {
  return p.source == kArcSource ? arc_.state(p.index) : p;
}

double SuspensionSpace::height(const Point& p) const {
  return p.source == kArcSource ? arc_.height(p.index) : 0.0;
}

double SuspensionSpace::distance(const Point& a, const Point& b) const {
  return std::max(base_->distance(base_part(a), base_part(b)), circle_distance(height(a), height(b)));
}

bool SuspensionSpace::contains(const Point& p) const {
  return p.source == kArcSource || base_->contains(p);
}

std::string SuspensionSpace::metric_descriptor() const {
  return "max(base: " + base_->metric_descriptor() + ", arc distance of suspension heights)";
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<double>> distances, std::string label)
    : d_(std::move(distances)), label_(std::move(label)) {
  for (std::size_t i = 0; i < d_.size(); ++i) {
    if (d_[i].size() != d_.size()) throw InputError("distance matrix must be square");
    for (std::size_t j = 0; j < d_.size(); ++j) {
      if (!(d_[i][j] >= 0.0) || d_[i][j] != d_[j][i]) throw InputError("distance matrix must be symmetric and nonnegative");
      diameter_ = std::max(diameter_, d_[i][j]);
    }
  }
}

double FiniteMetricSpace::distance(const Point& a, const Point& b) const {
  return d_[static_cast<std::size_t>(a.index)][static_cast<std::size_t>(b.index)];
}

bool FiniteMetricSpace::contains(const Point& p) const {
  return p.source == 0 && p.index >= 0 && static_cast<std::size_t>(p.index) < d_.size();
}

std::vector<Point> FiniteMetricSpace::points() const {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < d_.size(); ++i) pts.push_back(Point{{0.0, 0.0}, static_cast<std::int64_t>(i), 0});
  return pts;
}

System::System(std::string name, SpacePtr space, MapFn forward, MapFn inverse, SystemFlags flags,
               IterateFn iterate)
    : name_(std::move(name)),
      space_(std::move(space)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      flags_(flags),
      iterate_(std::move(iterate)) {}

Point System::iterate(const Point& p, std::int64_t n) const {
  if (iterate_) return iterate_(p, n);
  Point q = p;
  if (n >= 0) {
    for (std::int64_t i = 0; i < n; ++i) q = forward_(q);
  } else {
    for (std::int64_t i = 0; i < -n; ++i) q = inverse_(q);
  }
  return q;
}

SampleCloud SampleCloud::with_radius(double radius) const {
  if (!(radius > 0.0)) throw InputError("resolution radius must be positive");
  SampleCloud c = *this;
  c.r = radius;
  return c;
}

std::vector<Point> merge_points(const AmbientSpace& space, const std::vector<Point>& points, double tol) {
  std::vector<Point> kept;
  const SpaceKind kind = space.kind();
  const bool geometric = kind == SpaceKind::circle || kind == SpaceKind::interval || kind == SpaceKind::torus2 ||
                         kind == SpaceKind::disk;
  if (geometric) {
    // Bucket grid with cell size >= tol; candidates live in adjacent cells.
    const double cell = std::max(tol, 1e-9);
    const bool periodic = kind == SpaceKind::circle || kind == SpaceKind::torus2;
    const auto cells = static_cast<std::int64_t>(std::ceil((kind == SpaceKind::disk ? 2.0 : 1.0) / cell));
    const bool two_d = kind == SpaceKind::torus2 || kind == SpaceKind::disk;
    auto key_of = [&](const Point& p) {
      const double ox = kind == SpaceKind::disk ? 1.0 : 0.0;
      auto cx = static_cast<std::int64_t>(std::floor((p.x[0] + ox) / cell));
      auto cy = two_d ? static_cast<std::int64_t>(std::floor((p.x[1] + ox) / cell)) : 0;
      return std::pair<std::int64_t, std::int64_t>{cx, cy};
    };
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets;
    for (const Point& p : points) {
      const auto [cx, cy] = key_of(p);
      bool merged = false;
      for (std::int64_t dx = -1; dx <= 1 && !merged; ++dx) {
        for (std::int64_t dy = two_d ? -1 : 0; dy <= (two_d ? 1 : 0) && !merged; ++dy) {
          std::int64_t kx = cx + dx;
          std::int64_t ky = cy + dy;
          if (periodic) {
            kx = ((kx % cells) + cells) % cells;
            if (two_d) ky = ((ky % cells) + cells) % cells;
          }
          auto it = buckets.find({kx, ky});
          if (it == buckets.end()) continue;
          for (std::size_t idx : it->second) {
            if (space.distance(kept[idx], p) <= tol) {
              merged = true;
              break;
            }
          }
        }
      }
      if (!merged) {
        auto [kx, ky] = key_of(p);
        if (periodic) {
          kx = ((kx % cells) + cells) % cells;
          if (two_d) ky = ((ky % cells) + cells) % cells;
        }
        buckets[{kx, ky}].push_back(kept.size());
        kept.push_back(p);
      }
    }
    return kept;
  }
  if (kind == SpaceKind::sequence) {
    // d <= tol iff the points agree on |k| <= h, which makes the merge an exact
    // key lookup on the central window.
    const auto& seq = static_cast<const SequenceSpace&>(space);
    std::int64_t h = seq.window();
    if (tol > 0.0) {
      h = static_cast<std::int64_t>(std::ceil(std::log2(1.0 / tol))) - 1;
      if (tol >= 1.0) h = -1;
    }
    std::unordered_map<std::string, std::size_t> seen;
    for (const Point& p : points) {
      const std::string key = h < 0 ? std::string() : seq.window_string(p, h);
      if (seen.emplace(key, kept.size()).second) kept.push_back(p);
    }
    return kept;
  }
  for (const Point& p : points) {
    bool merged = false;
    for (const Point& q : kept) {
      // Distinct points of a finite pseudometric space may sit at distance 0.
      if (kind == SpaceKind::finite && tol == 0.0 ? p == q : space.distance(p, q) <= tol) {
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(p);
  }
  return kept;
}

SampleCloud make_cloud(SpacePtr space, std::vector<Point> points, double r, Provenance provenance) {
  if (!(r > 0.0)) throw InputError("resolution radius must be positive");
  SampleCloud cloud;
  cloud.points = merge_points(*space, points, 0.0);
  cloud.space = std::move(space);
  cloud.r = r;
  cloud.provenance = std::move(provenance);
  return cloud;
}

Neighborhoods ball_neighborhoods(const SampleCloud& cloud, double r) {
  Neighborhoods balls(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (cloud.distance(i, j) <= r) balls[i].push_back(j);
    }
  });
  return balls;
}

SampleCloud sample_space(SpacePtr space, int density) {
  if (density < 2) throw InputError("sample density must be at least 2");
  std::vector<Point> pts;
  double r = 0.0;
  switch (space->kind()) {
    case SpaceKind::circle:
      for (int k = 0; k < density; ++k) pts.push_back(Point::real(static_cast<double>(k) / density));
      r = 0.5 / density;
      break;
    case SpaceKind::interval:
      for (int k = 0; k < density; ++k) pts.push_back(Point::real(static_cast<double>(k) / (density - 1)));
      r = 0.5 / (density - 1);
      break;
    case SpaceKind::torus2:
      for (int i = 0; i < density; ++i) {
        for (int j = 0; j < density; ++j) {
          pts.push_back(Point::planar(static_cast<double>(i) / density, static_cast<double>(j) / density));
        }
      }
      r = 0.5 / density;
      break;
    case SpaceKind::disk: {
      const double h = 2.0 / (density - 1);
      for (int i = 0; i < density; ++i) {
        for (int j = 0; j < density; ++j) {
          const double a = -1.0 + i * h;
          const double b = -1.0 + j * h;
          if (std::hypot(a, b) <= 1.0 + 1e-12) pts.push_back(Point::planar(a, b));
        }
      }
      // Shrinking a point radially by h/sqrt(2) keeps its nearest node inside
      // the disk, so every point of the disk is within h*sqrt(2) of the grid.
      r = h * std::numbers::sqrt2;
      if (pts.empty() || r >= space->diameter()) {
        throw InputError("density too small to cover the disk");
      }
      break;
    }
    default:
      throw InputError("sample_space supports circle, interval, torus2 and disk; use orbit_closure_sample for " +
                       to_string(space->kind()));
  }
  Provenance prov;
  prov.kind = ProvenanceKind::grid;
  prov.note = "grid density " + std::to_string(density);
  return make_cloud(std::move(space), std::move(pts), r, prov);
}

double probe_covering_radius(const SampleCloud& cloud, int probes_per_axis) {
  std::vector<Point> probes;
  const int n = probes_per_axis;
  switch (cloud.space->kind()) {
    case SpaceKind::circle:
    case SpaceKind::interval:
      for (int k = 0; k <= n; ++k) {
        double v = static_cast<double>(k) / n;
        if (cloud.space->kind() == SpaceKind::circle && k == n) break;
        probes.push_back(Point::real(v));
      }
      break;
    case SpaceKind::torus2:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          probes.push_back(Point::planar(static_cast<double>(i) / n, static_cast<double>(j) / n));
      break;
    case SpaceKind::disk:
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          const double a = -1.0 + 2.0 * i / n;
          const double b = -1.0 + 2.0 * j / n;
          const double rad = std::hypot(a, b);
          probes.push_back(rad <= 1.0 ? Point::planar(a, b) : Point::planar(a / rad, b / rad));
        }
      break;
    default:
      throw InputError("covering probe needs a geometric space");
  }
  std::vector<double> best(probes.size(), std::numeric_limits<double>::infinity());
  parallel_for(probes.size(), [&](std::size_t i) {
    for (const Point& q : cloud.points) best[i] = std::min(best[i], cloud.space->distance(probes[i], q));
  });
  return best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
}

std::vector<std::pair<std::int64_t, Point>> orbit_segment(const System& sys, const Point& x, const Horizon& horizon) {
  if (!sys.space().contains(x)) throw InputError("orbit_segment: point " + to_string(x) + " is not in the space");
  const std::int64_t n = horizon.n();
  std::vector<std::pair<std::int64_t, Point>> out(static_cast<std::size_t>(2 * n + 1));
  out[static_cast<std::size_t>(n)] = {0, x};
  Point fwd = x;
  Point bwd = x;
  for (std::int64_t k = 1; k <= n; ++k) {
    fwd = sys.forward(fwd);
    bwd = sys.inverse(bwd);
    require_finite(fwd, "orbit_segment");
    require_finite(bwd, "orbit_segment");
    out[static_cast<std::size_t>(n + k)] = {k, fwd};
    out[static_cast<std::size_t>(n - k)] = {-k, bwd};
  }
  return out;
}

SampleCloud orbit_closure_sample(const System& sys, const Point& x, const Horizon& horizon, double merge_tol) {
  if (merge_tol < 0.0) throw InputError("merge tolerance must be nonnegative");
  const auto seg = orbit_segment(sys, x, horizon);
  // Order 0, 1, -1, 2, -2, ... so a shorter horizon yields a prefix of the
  // same greedy merge sequence.
  std::vector<Point> ordered;
  ordered.reserve(seg.size());
  const std::int64_t n = horizon.n();
  ordered.push_back(seg[static_cast<std::size_t>(n)].second);
  for (std::int64_t k = 1; k <= n; ++k) {
    ordered.push_back(seg[static_cast<std::size_t>(n + k)].second);
    ordered.push_back(seg[static_cast<std::size_t>(n - k)].second);
  }
  SampleCloud cloud;
  cloud.points = merge_points(sys.space(), ordered, merge_tol);
  cloud.space = sys.space_ptr();
  if (merge_tol > 0.0) {
    cloud.r = merge_tol;
  } else {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = i + 1; j < cloud.size(); ++j) gap = std::min(gap, cloud.distance(i, j));
    cloud.r = std::isfinite(gap) && gap > 0.0 ? 0.5 * gap : 0.5 * sys.space().diameter();
  }
  cloud.provenance.kind = ProvenanceKind::orbit_closure;
  cloud.provenance.seed = x;
  cloud.provenance.horizon = n;
  return cloud;
}

// ---------------------------------------------------------------------------
// Gallery

System make_rotation(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("rotation angle must lie in (0,1)");
  auto space = std::make_shared<CircleSpace>();
  SystemFlags flags;
  flags.isometry = true;
  const long double a = alpha;
  System sys(
      "rotation", space, [alpha](const Point& p) { return Point::real(wrap_unit(p.x[0] + alpha)); },
      [alpha](const Point& p) { return Point::real(wrap_unit(p.x[0] - alpha)); }, flags,
      [a](const Point& p, std::int64_t n) {
        return Point::real(static_cast<double>(wrap_unit_long(static_cast<long double>(p.x[0]) + a * n)));
      });
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha;
  sys.description = os.str();
  return sys;
}

System make_toral_automorphism(const std::array<std::array<long long, 2>, 2>& m, bool require_hyperbolic) {
  const long long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det != 1 && det != -1) throw InputError("toral automorphism matrix must have determinant +-1");
  const long long trace = m[0][0] + m[1][1];
  if (require_hyperbolic) {
    // Eigenvalues off the unit circle iff |trace| > 2 (det 1) or trace != 0 (det -1).
    const bool hyperbolic = det == 1 ? std::llabs(trace) > 2 : trace != 0;
    if (!hyperbolic) throw InputError("toral automorphism is not hyperbolic");
  }
  const std::array<std::array<long long, 2>, 2> inv{{{det * m[1][1], -det * m[0][1]}, {-det * m[1][0], det * m[0][0]}}};
  auto apply = [](const std::array<std::array<long long, 2>, 2>& a) {
    return [a](const Point& p) {
      const double u = static_cast<double>(a[0][0]) * p.x[0] + static_cast<double>(a[0][1]) * p.x[1];
      const double v = static_cast<double>(a[1][0]) * p.x[0] + static_cast<double>(a[1][1]) * p.x[1];
      return Point::planar(wrap_unit(u), wrap_unit(v));
    };
  };
  System sys("toral-auto", std::make_shared<Torus2Space>(), apply(m), apply(inv));
  std::ostringstream os;
  os << "matrix=[[" << m[0][0] << "," << m[0][1] << "],[" << m[1][0] << "," << m[1][1] << "]]";
  sys.description = os.str();
  return sys;
}

System make_interval_homeo(const IntervalHomeoSpec& spec) {
  auto space = std::make_shared<IntervalSpace>();
  if (spec.knots.empty()) {
    const double p = spec.power;
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("interval homeomorphism power must be positive");
    System sys(
        "interval-homeo", space, [p](const Point& q) { return Point::real(std::pow(q.x[0], p)); },
        [p](const Point& q) { return Point::real(std::pow(q.x[0], 1.0 / p)); });
    sys.description = "f(x)=x^" + std::to_string(p);
    return sys;
  }
  const auto& k = spec.knots;
  if (k.size() < 2 || k.front() != std::pair<double, double>{0.0, 0.0} || k.back() != std::pair<double, double>{1.0, 1.0}) {
    throw InputError("interval homeomorphism knots must start at (0,0) and end at (1,1)");
  }
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (!(k[i].first > k[i - 1].first) || !(k[i].second > k[i - 1].second)) {
      throw InputError("interval homeomorphism knots must be strictly increasing (non-monotone spec)");
    }
  }
  auto piecewise = [](std::vector<std::pair<double, double>> knots) {
    return [knots](const Point& q) {
      const double x = q.x[0];
      for (std::size_t i = 1; i < knots.size(); ++i) {
        if (x <= knots[i].first || i + 1 == knots.size()) {
          const auto [x0, y0] = knots[i - 1];
          const auto [x1, y1] = knots[i];
          return Point::real(std::clamp(y0 + (x - x0) * (y1 - y0) / (x1 - x0), 0.0, 1.0));
        }
      }
      return q;
    };
  };
  std::vector<std::pair<double, double>> swapped;
  for (const auto& [a, b] : k) swapped.emplace_back(b, a);
  System sys("interval-homeo", space, piecewise(k), piecewise(swapped));
  sys.description = "piecewise-linear, " + std::to_string(k.size()) + " knots";
  return sys;
}

System make_circle_homeo(double alpha, double beta) {
  if (!(std::fabs(beta) < 1.0)) throw InputError("circle homeomorphism needs |beta| < 1");
  if (!std::isfinite(alpha)) throw InputError("circle homeomorphism needs a finite alpha");
  auto lift = [beta](double x) { return x + beta * std::sin(kTwoPi * x) / kTwoPi; };
  auto forward = [alpha, lift](const Point& p) { return Point::real(wrap_unit(lift(p.x[0]) + alpha)); };
  auto inverse = [alpha, beta, lift](const Point& p) {
    // The lift is strictly increasing with |lift(u) - u| <= |beta|/2pi.
    const double target = p.x[0] - alpha;
    const double slack = std::fabs(beta) / kTwoPi + 1e-12;
    double lo = target - slack;
    double hi = target + slack;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lift(mid) < target ? lo : hi) = mid;
    }
    return Point::real(wrap_unit(0.5 * (lo + hi)));
  };
  SystemFlags flags;
  flags.isometry = beta == 0.0;
  System sys("circle-homeo", std::make_shared<CircleSpace>(), forward, inverse, flags);
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha << ",beta=" << beta;
  sys.description = os.str();
  return sys;
}

System make_disk_twist() {
  auto twist = [](double sign) {
    return [sign](const Point& p) {
      const double rad = std::hypot(p.x[0], p.x[1]);
      const double angle = sign * kTwoPi * rad;
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      return Point::planar(c * p.x[0] - s * p.x[1], s * p.x[0] + c * p.x[1]);
    };
  };
  System sys("disk-twist", std::make_shared<DiskSpace>(), twist(1.0), twist(-1.0));
  sys.description = "Tz = z exp(2 pi i |z|)";
  return sys;
}

System make_fixed_points(std::size_t count) {
  if (count == 0) throw InputError("need at least one fixed point");
  std::vector<std::vector<double>> d(count, std::vector<double>(count, 1.0));
  for (std::size_t i = 0; i < count; ++i) d[i][i] = 0.0;
  auto space = std::make_shared<FiniteMetricSpace>(std::move(d), "discrete metric on " + std::to_string(count) + " points");
  auto identity = [](const Point& p) { return p; };
  System sys("fixed-points", space, identity, identity, SystemFlags{true, false},
             [](const Point& p, std::int64_t) { return p; });
  sys.description = std::to_string(count) + " fixed points";
  return sys;
}

double default_takens_height(std::int64_t n) {
  return std::atan(static_cast<double>(n)) / std::numbers::pi + 0.5;
}

System takens_suspension(const std::vector<Point>& states, std::int64_t first_index, const System& base,
                         const TakensOptions& options) {
  if (states.empty()) return base;
  const auto height = options.height;
  const std::int64_t last_index = first_index + static_cast<std::int64_t>(states.size()) - 1;

  // Heights: strictly increasing around the supplied range, limits 0 and 1.
  for (std::int64_t n = first_index - 64; n < last_index + 64; ++n) {
    if (!(height(n) < height(n + 1))) throw InputError("t-sequence is not strictly monotone");
    if (!(height(n) > 0.0 && height(n) < 1.0)) throw InputError("t-sequence must lie in (0,1)");
  }
  if (!(height(-1000000000) < 1e-6 && height(1000000000) > 1.0 - 1e-6)) {
    throw InputError("t-sequence must tend to 0 and 1");
  }

  auto shared_states = std::make_shared<const std::vector<Point>>(states);
  auto base_sys = std::make_shared<const System>(base);
  auto state = [shared_states, base_sys, first_index, last_index](std::int64_t n) {
    const auto& s = *shared_states;
    if (n < first_index) return base_sys->iterate(s.front(), n - first_index);
    if (n > last_index) return base_sys->iterate(s.back(), n - last_index);
    return s[static_cast<std::size_t>(n - first_index)];
  };

  const std::int64_t tail = std::min<std::int64_t>(options.tail_check, static_cast<std::int64_t>(states.size()) - 1);
  for (std::int64_t i = 0; i < tail; ++i) {
    for (std::int64_t n : {first_index + i, last_index - 1 - i}) {
      const double err = base.distance(base.forward(state(n)), state(n + 1));
      if (err > options.pseudo_orbit_tol) {
        throw InputError("pseudo-orbit tolerance violated at index " + std::to_string(n));
      }
    }
  }

  auto space = std::make_shared<SuspensionSpace>(base.space_ptr(), ArcData{state, height});
  auto forward = [base_sys](const Point& p) {
    if (p.source == kArcSource) return Point{{0.0, 0.0}, p.index + 1, kArcSource};
    return base_sys->forward(p);
  };
  auto inverse = [base_sys](const Point& p) {
    if (p.source == kArcSource) return Point{{0.0, 0.0}, p.index - 1, kArcSource};
    return base_sys->inverse(p);
  };
  auto iterate = [base_sys](const Point& p, std::int64_t n) {
    if (p.source == kArcSource) return Point{{0.0, 0.0}, p.index + n, kArcSource};
    return base_sys->iterate(p, n);
  };
  System sys("takens(" + base.name() + ")", space, forward, inverse, {}, iterate);
  sys.description = "suspension over " + base.name() + ", pseudo-orbit indices " + std::to_string(first_index) +
                    ".." + std::to_string(last_index);
  return sys;
}

SampleCloud takens_cloud(const System& suspension, const std::vector<Point>& base_points, std::int64_t depth) {
  if (suspension.space().kind() != SpaceKind::suspension) throw InputError("takens_cloud needs a suspension system");
  std::vector<Point> pts = base_points;
  for (std::int64_t n = -depth; n <= depth; ++n) pts.push_back(Point{{0.0, 0.0}, n, kArcSource});
  SampleCloud cloud;
  cloud.points = merge_points(suspension.space(), pts, 0.0);
  cloud.space = suspension.space_ptr();
  double gap = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (i != j) nearest = std::min(nearest, cloud.distance(i, j));
    }
    if (std::isfinite(nearest)) gap = std::max(gap, nearest);
  }
  cloud.r = gap > 0.0 ? 0.5 * gap : 0.5;
  cloud.provenance.kind = ProvenanceKind::explicit_points;
  cloud.provenance.horizon = depth;
  cloud.provenance.note = "suspension base points plus arc states |n| <= " + std::to_string(depth);
  return cloud;
}

}  // namespace dynlab
