#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynlab {

/// Malformed user input: bad parameters, unparsable specs, invalid scales.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric evaluation left the representable range (overflow, NaN).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (kernel/oracle mismatch, broken invariant).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on data that does not satisfy its precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of some ambient space.
///
/// Geometric spaces use `x` (circle/interval: x[0]; torus/disk: x[0], x[1]).
/// Sequence spaces use `source` (the registered symbol source) and `index`
/// (the shift offset: symbol k of the point is source(index + k)).
/// Suspension spaces mark arc states with `source == kArcSource` and the state
/// number in `index`; base points keep their base representation.
struct Point {
  std::array<double, 2> x{0.0, 0.0};
  std::int64_t index = 0;
  std::int32_t source = 0;

  static Point real(double a) { return Point{{a, 0.0}, 0, 0}; }
  static Point planar(double a, double b) { return Point{{a, b}, 0, 0}; }
  static Point symbolic(std::int32_t src, std::int64_t offset) { return Point{{0.0, 0.0}, offset, src}; }

  friend bool operator==(const Point&, const Point&) = default;
};

inline constexpr std::int32_t kArcSource = -7;

std::string to_string(const Point& p);

/// The symmetric integer window {-N, ..., N}.
class Horizon {
 public:
  explicit Horizon(std::int64_t n) : n_(n) {
    if (n < 0) throw InputError("horizon must be nonnegative");
  }
  std::int64_t n() const { return n_; }
  std::int64_t size() const { return 2 * n_ + 1; }
  bool contains(std::int64_t k) const { return k >= -n_ && k <= n_; }

 private:
  std::int64_t n_;
};

/// Number of worker threads used by the parallel loops (default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Each index is visited exactly once; results must
/// be written to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Default epsilon grid {2^-1, ..., 2^-10} scaled by `diameter`, descending.
std::vector<double> default_epsilon_grid(double diameter);

}  // namespace dynlab
