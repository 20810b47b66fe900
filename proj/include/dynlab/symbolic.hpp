#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynlab/spaces.hpp"

namespace dynlab {

/// Words are strings of digit characters '0'..'9'.
using Word = std::string;

/// Continued fraction [a0; a1, a2, ...] of an irrational in (0,1).
struct ContinuedFraction {
  std::vector<std::int64_t> terms;

  long double value() const;
  /// (p_k, q_k) for k = 0..terms.size()-1.
  std::vector<std::pair<std::int64_t, std::int64_t>> convergents() const;
  /// Expansion of x in (0,1) with denominators up to max_denominator.
  /// Rejects x whose expansion terminates (rational).
  static ContinuedFraction from_value(long double x, std::int64_t max_denominator = 1'000'000'000);
  /// (sqrt5 - 1)/2 = [0; 1, 1, 1, ...] with `count` ones.
  static ContinuedFraction golden(int count = 40);
};

/// Declared eventual periodicity of an explicit generator:
/// w(n) = w(n + right_period) for n >= right_from and w(n) = w(n - left_period) for n <= left_from.
struct TailDeclaration {
  std::int64_t left_from = 0;
  std::int64_t left_period = 1;
  std::int64_t right_from = 0;
  std::int64_t right_period = 1;
};

/// Declared uniform recurrence: every n-word of the sequence occurs in every block of length window(n).
struct RecurrenceDeclaration {
  std::function<std::int64_t(std::int64_t)> window;
};

struct ExplicitGenerator {
  std::function<int(std::int64_t)> fn;
  std::string label;
  std::optional<TailDeclaration> tails;
  std::optional<RecurrenceDeclaration> recurrence;
};

enum class SubshiftKind { full, sft, substitution, sturmian, explicit_generator };

std::string to_string(SubshiftKind kind);

/// A subshift of S^Z, S = {0..alphabet-1}, with (T w)(k) = w(k+1).
class Subshift {
 public:
  static Subshift full(int alphabet);
  static Subshift sft(int alphabet, std::vector<Word> forbidden);
  /// rules[c] is the image of letter c.
  static Subshift substitution(int alphabet, std::vector<Word> rules);
  static Subshift sturmian(ContinuedFraction alpha, double intercept = 0.0);
  static Subshift explicit_generator(int alphabet, ExplicitGenerator generator);

  SubshiftKind kind() const { return kind_; }
  int alphabet() const { return alphabet_; }
  const std::vector<Word>& forbidden() const { return forbidden_; }
  const std::vector<Word>& rules() const { return rules_; }
  const ContinuedFraction& alpha() const { return alpha_; }
  double intercept() const { return intercept_; }
  const ExplicitGenerator& generator() const { return generator_; }
  std::string describe() const;

 private:
  SubshiftKind kind_ = SubshiftKind::full;
  int alphabet_ = 2;
  std::vector<Word> forbidden_;
  std::vector<Word> rules_;
  ContinuedFraction alpha_;
  double intercept_ = 0.0;
  ExplicitGenerator generator_;
};

/// Admissible words of length n, sorted.
std::vector<Word> language(const Subshift& sub, int n);

/// p(1..n_max).
std::vector<std::size_t> complexity_profile(const Subshift& sub, int n_max);

/// 1/2 under the 2^-min|k| metric; nullopt for a one-point subshift.
std::optional<double> expansivity_constant(const Subshift& sub);

enum class Countability { countable, uncountable, unknown };
enum class RNVerdict { rn, not_rn, unknown };

std::string to_string(Countability c);
std::string to_string(RNVerdict v);

struct ClassificationResult {
  Countability countability = Countability::unknown;
  RNVerdict rn = RNVerdict::unknown;
  std::string rule;
  /// Cycle listing, aperiodicity witness or depth-exhausted note.
  std::vector<std::string> evidence;
  int depth = 0;
};

ClassificationResult classify_countability(const Subshift& sub, int depth);

struct PeriodicityCheck {
  std::size_t sampled = 0;
  std::size_t recurrent = 0;
  std::size_t periodic = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

/// For RN (countable) subshifts: every sampled point whose central block
/// recurs across its window must be periodic. Throws PreconditionError otherwise.
PeriodicityCheck recurrent_periodicity_check(const Subshift& sub, int depth);

/// Points of the subshift as windows w[-depth..depth] (length 2*depth+1).
std::vector<Word> sample_windows(const Subshift& sub, int depth);

/// Thue-Morse symbol with the mirror convention w(-n-1) = w(n).
int morse_symbol(std::int64_t n);
Subshift morse_generator();

/// Symbol of the Sturmian coding: 1 iff frac(theta + k*alpha) lies in [1-alpha, 1).
int sturmian_symbol(long double alpha, long double theta, std::int64_t k);

/// Binary Champernowne word to the right; its complement mirrored to the left.
SourcePtr champernowne_source();

/// A bi-infinite point of the subshift usable as a symbol source.
/// Sources backed by finite precomputation cover |k| <= reach.
SourcePtr subshift_point(const Subshift& sub, std::int64_t reach = 1 << 14);

/// The shift on the sequence space spanned by `sources`, with the closed-form d_H.
System shift_system(std::string name, int alphabet, int window, std::vector<SourcePtr> sources);

/// Sturmian coding of rotation by alpha with both closure conventions on the orbit {n alpha}.
struct TwoArrowsModel {
  ContinuedFraction alpha;
  System system;
  SampleCloud cloud;
  /// Sources 0 and 1 carry the + and - codings of the orbit; point (s, m) codes m*alpha.
  static constexpr std::int32_t kPlus = 0;
  static constexpr std::int32_t kMinus = 1;
  /// Intercepts of the remaining (off-orbit) sources, indexed by source id.
  std::vector<long double> intercepts;

  Point orbit_point(std::int32_t tag, std::int64_t m) const { return Point::symbolic(tag, m); }
  /// Factor map onto the rotation circle.
  double project(const Point& p) const;
  bool on_orbit(const Point& p) const { return p.source == kPlus || p.source == kMinus; }
};

/// depth bounds the coded orbit window: orbit points m with |m| <= orbit_reach
/// and `generic` off-orbit intercepts enter the cloud.
TwoArrowsModel sturmian_two_arrows(const ContinuedFraction& alpha, std::int64_t depth, std::int64_t orbit_reach = 300,
                                   int generic = 64);

}  // namespace dynlab
