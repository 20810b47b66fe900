#include "dynlab/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dynlab/graph.hpp"

namespace dynlab {
namespace {

constexpr std::size_t kMaxWords = std::size_t{1} << 22;

bool has_forbidden(const Word& w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden) {
    if (w.find(f) != Word::npos) return true;
  }
  return false;
}

void check_symbols(const Word& w, int alphabet, const std::string& what) {
  for (char c : w) {
    if (c < '0' || c >= '0' + alphabet) throw InputError(what + ": symbol '" + std::string(1, c) + "' is outside the alphabet");
  }
}

// Vertices are the allowed words of length `memory`; u -> v when v = u[1:] + c
// and u + c is allowed. Only the essential part (vertices on bi-infinite paths) is kept.
struct FollowerGraph {
  int memory = 1;
  std::vector<Word> vertices;
  Adjacency out;
  Adjacency in;
};

FollowerGraph follower_graph(const Subshift& sub) {
  const int a = sub.alphabet();
  std::size_t maxlen = 1;
  for (const Word& f : sub.forbidden()) maxlen = std::max(maxlen, f.size());
  FollowerGraph g;
  g.memory = static_cast<int>(std::max<std::size_t>(1, maxlen - 1));
  const double count = std::pow(static_cast<double>(a), g.memory);
  if (count > static_cast<double>(kMaxWords)) throw InputError("SFT memory too large for the follower graph");

  std::vector<Word> all;
  Word w(static_cast<std::size_t>(g.memory), '0');
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    std::size_t rem = k;
    for (int i = g.memory - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<char>('0' + rem % static_cast<std::size_t>(a));
      rem /= static_cast<std::size_t>(a);
    }
    if (!has_forbidden(w, sub.forbidden())) all.push_back(w);
  }
  std::map<Word, std::size_t> id;
  for (std::size_t i = 0; i < all.size(); ++i) id[all[i]] = i;
  Adjacency out(all.size());
  Adjacency in(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (int c = 0; c < a; ++c) {
      const Word ext = all[i] + static_cast<char>('0' + c);
      if (has_forbidden(ext, sub.forbidden())) continue;
      auto it = id.find(ext.substr(1));
      if (it == id.end()) continue;
      out[i].push_back(it->second);
      in[it->second].push_back(i);
    }
  }
  // Trim vertices without a predecessor or successor until stable.
  std::vector<char> alive(all.size(), 1);
  std::vector<std::size_t> indeg(all.size()), outdeg(all.size());
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < all.size(); ++i) {
    indeg[i] = in[i].size();
    outdeg[i] = out[i].size();
    if (indeg[i] == 0 || outdeg[i] == 0) {
      alive[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t w2 : out[v]) {
      if (alive[w2] && --indeg[w2] == 0) {
        alive[w2] = 0;
        queue.push_back(w2);
      }
    }
    for (std::size_t u : in[v]) {
      if (alive[u] && --outdeg[u] == 0) {
        alive[u] = 0;
        queue.push_back(u);
      }
    }
  }
  std::vector<std::size_t> remap(all.size(), SIZE_MAX);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (alive[i]) {
      remap[i] = g.vertices.size();
      g.vertices.push_back(all[i]);
    }
  }
  g.out.assign(g.vertices.size(), {});
  g.in.assign(g.vertices.size(), {});
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t j : out[i]) {
      if (alive[j]) {
        g.out[remap[i]].push_back(remap[j]);
        g.in[remap[j]].push_back(remap[i]);
      }
    }
  }
  return g;
}

std::string cycle_text(const FollowerGraph& g, const std::vector<std::size_t>& cycle) {
  std::string s;
  for (std::size_t v : cycle) s += g.vertices[v] + "->";
  return s + g.vertices[cycle.front()];
}

std::vector<std::size_t> cycle_through(const FollowerGraph& g, std::size_t v, std::size_t first_step) {
  auto path = shortest_path(g.out, first_step, v);
  std::vector<std::size_t> cycle{v};
  if (first_step != v) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) cycle.push_back(path[k]);
  }
  return cycle;
}

Word apply_substitution(const std::vector<Word>& rules, const Word& w) {
  Word out;
  for (char c : w) out += rules[static_cast<std::size_t>(c - '0')];
  return out;
}

std::set<Word> factors(const Word& w, std::size_t n) {
  std::set<Word> out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) out.insert(w.substr(i, n));
  return out;
}

std::optional<std::size_t> smallest_period(const Word& w, std::size_t max_period) {
  for (std::size_t p = 1; p <= max_period && p < w.size(); ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < w.size() && ok; ++i) ok = w[i] == w[i + p];
    if (ok) return p;
  }
  return std::nullopt;
}

Word generator_window(const ExplicitGenerator& gen, int alphabet, std::int64_t from, std::int64_t to) {
  Word w;
  for (std::int64_t k = from; k <= to; ++k) {
    const int s = gen.fn(k);
    if (s < 0 || s >= alphabet) throw InputError("generator '" + gen.label + "' emitted a symbol outside the alphabet");
    w.push_back(static_cast<char>('0' + s));
  }
  return w;
}

bool is_primitive(const std::vector<Word>& rules, int alphabet) {
  const auto a = static_cast<std::size_t>(alphabet);
  std::vector<std::vector<char>> m(a, std::vector<char>(a, 0));
  for (std::size_t i = 0; i < a; ++i)
    for (char c : rules[i]) m[i][static_cast<std::size_t>(c - '0')] = 1;
  std::vector<std::vector<char>> power = m;
  for (std::size_t k = 0; k < (a - 1) * (a - 1) + 1; ++k) {
    bool positive = true;
    for (const auto& row : power)
      for (char v : row) positive = positive && v;
    if (positive) return true;
    std::vector<std::vector<char>> next(a, std::vector<char>(a, 0));
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < a; ++j)
        for (std::size_t l = 0; l < a && !next[i][j]; ++l) next[i][j] = power[i][l] && m[l][j];
    power = std::move(next);
  }
  return false;
}

// Long prefix of a fixed point of some power of the substitution.
Word substitution_prefix(const std::vector<Word>& rules, std::size_t length) {
  Word w = "0";
  for (int guard = 0; w.size() < length && guard < 64; ++guard) {
    Word next = apply_substitution(rules, w);
    if (next.size() <= w.size()) break;
    w = std::move(next);
  }
  return w.substr(0, std::min(length, w.size()));
}

const std::vector<int>& champernowne_digits(int alphabet) {
  static std::mutex mu;
  static std::map<int, std::vector<int>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& digits = cache[alphabet];
  if (digits.empty()) {
    constexpr std::size_t kLength = std::size_t{1} << 20;
    for (int len = 1; digits.size() < kLength; ++len) {
      std::vector<int> word(static_cast<std::size_t>(len), 0);
      for (;;) {
        digits.insert(digits.end(), word.begin(), word.end());
        if (digits.size() >= kLength) break;
        int i = len - 1;
        while (i >= 0 && word[static_cast<std::size_t>(i)] == alphabet - 1) word[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++word[static_cast<std::size_t>(i)];
      }
    }
  }
  return digits;
}

SourcePtr champernowne(int alphabet) {
  const std::vector<int>& digits = champernowne_digits(alphabet);
  return std::make_shared<FunctionSource>(
      [&digits, alphabet](std::int64_t n) {
        const std::int64_t k = n >= 0 ? n : -n - 1;
        if (k >= static_cast<std::int64_t>(digits.size())) throw NumericError("Champernowne source exhausted");
        const int d = digits[static_cast<std::size_t>(k)];
        return n >= 0 ? d : alphabet - 1 - d;
      },
      "champernowne(" + std::to_string(alphabet) + ")");
}

// Finite two-sided buffer: symbols[k + reach] for |k| <= reach.
SourcePtr buffered_source(std::vector<int> symbols, std::int64_t reach, std::string label) {
  auto shared = std::make_shared<const std::vector<int>>(std::move(symbols));
  return std::make_shared<FunctionSource>(
      [shared, reach](std::int64_t n) {
        if (n < -reach || n > reach) throw NumericError("subshift point requested beyond its precomputed reach");
        return (*shared)[static_cast<std::size_t>(n + reach)];
      },
      std::move(label));
}

long double frac_l(long double v) {
  long double w = v - std::floor(v);
  return w >= 1.0L ? 0.0L : w;
}

}  // namespace

long double ContinuedFraction::value() const {
  if (terms.empty()) throw InputError("continued fraction has no terms");
  long double x = 0.0L;
  for (std::size_t k = terms.size() - 1; k >= 1; --k) x = 1.0L / (static_cast<long double>(terms[k]) + x);
  return static_cast<long double>(terms[0]) + x;
}

std::vector<std::pair<std::int64_t, std::int64_t>> ContinuedFraction::convergents() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  for (std::int64_t a : terms) {
    const std::int64_t p = a * p1 + p2;
    const std::int64_t q = a * q1 + q2;
    out.emplace_back(p, q);
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return out;
}

ContinuedFraction ContinuedFraction::from_value(long double x, std::int64_t max_denominator) {
  if (!(x > 0.0L && x < 1.0L)) throw InputError("continued fraction value must lie in (0,1)");
  ContinuedFraction cf;
  cf.terms.push_back(0);
  long double f = x;
  std::int64_t q_prev = 0, q = 1;
  while (q <= max_denominator) {
    if (f < 1e-12L) throw InputError("value is rational within the requested depth");
    const long double rest = 1.0L / f;
    const long double a = std::floor(rest);
    cf.terms.push_back(static_cast<std::int64_t>(a));
    const std::int64_t q_next = static_cast<std::int64_t>(a) * q + q_prev;
    q_prev = q;
    q = q_next;
    f = rest - a;
  }
  return cf;
}

ContinuedFraction ContinuedFraction::golden(int count) {
  ContinuedFraction cf;
  cf.terms.push_back(0);
  for (int k = 0; k < count; ++k) cf.terms.push_back(1);
  return cf;
}

std::string to_string(SubshiftKind kind) {
  switch (kind) {
    case SubshiftKind::full: return "full";
    case SubshiftKind::sft: return "sft";
    case SubshiftKind::substitution: return "substitution";
    case SubshiftKind::sturmian: return "sturmian";
    case SubshiftKind::explicit_generator: return "explicit";
  }
  return "unknown";
}

Subshift Subshift::full(int alphabet) {
  if (alphabet < 1 || alphabet > 10) throw InputError("alphabet size must be in 1..10");
  Subshift s;
  s.kind_ = SubshiftKind::full;
  s.alphabet_ = alphabet;
  return s;
}

Subshift Subshift::sft(int alphabet, std::vector<Word> forbidden) {
  Subshift s = full(alphabet);
  s.kind_ = SubshiftKind::sft;
  for (const Word& f : forbidden) {
    if (f.empty()) throw InputError("forbidden words must be nonempty");
    check_symbols(f, alphabet, "forbidden word");
  }
  s.forbidden_ = std::move(forbidden);
  return s;
}

Subshift Subshift::substitution(int alphabet, std::vector<Word> rules) {
  Subshift s = full(alphabet);
  s.kind_ = SubshiftKind::substitution;
  if (rules.size() != static_cast<std::size_t>(alphabet)) throw InputError("substitution needs one rule per letter");
  for (const Word& r : rules) {
    if (r.empty()) throw InputError("substitution images must be nonempty");
    check_symbols(r, alphabet, "substitution rule");
  }
  s.rules_ = std::move(rules);
  return s;
}

Subshift Subshift::sturmian(ContinuedFraction alpha, double intercept) {
  if (alpha.terms.size() < 2 || alpha.terms[0] != 0) throw InputError("Sturmian angle must be [0; a1, a2, ...] in (0,1)");
  for (std::size_t k = 1; k < alpha.terms.size(); ++k) {
    if (alpha.terms[k] < 1) throw InputError("continued fraction terms must be positive");
  }
  Subshift s = full(2);
  s.kind_ = SubshiftKind::sturmian;
  s.alpha_ = std::move(alpha);
  s.intercept_ = intercept;
  return s;
}

Subshift Subshift::explicit_generator(int alphabet, ExplicitGenerator generator) {
  Subshift s = full(alphabet);
  s.kind_ = SubshiftKind::explicit_generator;
  if (!generator.fn) throw InputError("explicit generator needs a function");
  if (generator.tails) {
    const auto& t = *generator.tails;
    if (t.left_period < 1 || t.right_period < 1 || t.left_from > t.right_from) {
      throw InputError("invalid eventual-periodicity declaration");
    }
  }
  s.generator_ = std::move(generator);
  return s;
}

std::string Subshift::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << " over " << alphabet_ << " symbols";
  switch (kind_) {
    case SubshiftKind::sft:
      os << ", forbidden {";
      for (std::size_t i = 0; i < forbidden_.size(); ++i) os << (i ? "," : "") << forbidden_[i];
      os << "}";
      break;
    case SubshiftKind::substitution:
      for (std::size_t i = 0; i < rules_.size(); ++i) os << ", " << i << "->" << rules_[i];
      break;
    case SubshiftKind::sturmian: {
      os << ", alpha=[";
      for (std::size_t i = 0; i < alpha_.terms.size() && i < 8; ++i) os << (i == 1 ? ";" : i ? "," : "") << alpha_.terms[i];
      os << (alpha_.terms.size() > 8 ? ",...]" : "]");
      break;
    }
    case SubshiftKind::explicit_generator:
      os << ", generator " << generator_.label;
      break;
    default:
      break;
  }
  return os.str();
}

std::vector<Word> language(const Subshift& sub, int n) {
  if (n < 1) throw InputError("word length must be positive");
  const auto len = static_cast<std::size_t>(n);
  std::set<Word> words;
  switch (sub.kind()) {
    case SubshiftKind::full: {
      const double count = std::pow(static_cast<double>(sub.alphabet()), n);
      if (count > static_cast<double>(kMaxWords)) throw InputError("language too large to enumerate");
      std::vector<Word> out;
      Word w(len, '0');
      for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
        std::size_t rem = k;
        for (std::size_t i = len; i-- > 0;) {
          w[i] = static_cast<char>('0' + rem % static_cast<std::size_t>(sub.alphabet()));
          rem /= static_cast<std::size_t>(sub.alphabet());
        }
        out.push_back(w);
      }
      return out;
    }
    case SubshiftKind::sft: {
      const FollowerGraph g = follower_graph(sub);
      const auto m = static_cast<std::size_t>(g.memory);
      if (len <= m) {
        for (const Word& v : g.vertices)
          for (std::size_t i = 0; i + len <= m; ++i) words.insert(v.substr(i, len));
        break;
      }
      // Depth-first extension along edges.
      struct Frame {
        std::size_t vertex;
        Word word;
      };
      for (std::size_t start = 0; start < g.vertices.size(); ++start) {
        std::vector<Frame> stack{{start, g.vertices[start]}};
        while (!stack.empty()) {
          Frame f = std::move(stack.back());
          stack.pop_back();
          if (f.word.size() == len) {
            words.insert(std::move(f.word));
            if (words.size() > kMaxWords) throw InputError("language too large to enumerate");
            continue;
          }
          for (std::size_t w : g.out[f.vertex]) stack.push_back({w, f.word + g.vertices[w].back()});
        }
      }
      break;
    }
    case SubshiftKind::substitution: {
      std::vector<Word> images;
      for (int c = 0; c < sub.alphabet(); ++c) images.emplace_back(1, static_cast<char>('0' + c));
      std::set<Word> previous;
      for (int round = 0; round < 64; ++round) {
        std::set<Word> current;
        std::size_t shortest = SIZE_MAX;
        for (const Word& img : images) {
          auto f = factors(img, len);
          current.insert(f.begin(), f.end());
          shortest = std::min(shortest, img.size());
        }
        if (shortest >= 8 * len && current == previous) return {current.begin(), current.end()};
        previous = std::move(current);
        std::size_t total = 0;
        for (Word& img : images) {
          img = apply_substitution(sub.rules(), img);
          total += img.size();
        }
        if (total > kMaxWords * 4) break;
      }
      throw InputError("substitution language did not stabilize");
    }
    case SubshiftKind::sturmian: {
      const long double alpha = sub.alpha().value();
      std::vector<long double> cuts;
      for (int k = 0; k <= n; ++k) cuts.push_back(frac_l(-k * alpha));
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i < cuts.size(); ++i) {
        const long double lo = cuts[i];
        const long double hi = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + 1.0L;
        if (hi - lo <= 0.0L) continue;
        const long double theta = frac_l(0.5L * (lo + hi));
        Word w;
        for (int k = 0; k < n; ++k) w.push_back(static_cast<char>('0' + sturmian_symbol(alpha, theta, k)));
        words.insert(w);
      }
      break;
    }
    case SubshiftKind::explicit_generator: {
      const ExplicitGenerator& gen = sub.generator();
      std::int64_t from = 0;
      std::int64_t to = 0;
      if (gen.tails) {
        from = gen.tails->left_from - gen.tails->left_period - n;
        to = gen.tails->right_from + gen.tails->right_period + n;
      } else if (gen.recurrence) {
        from = 0;
        to = gen.recurrence->window(n) - 1;
      } else {
        throw InputError("generator '" + gen.label + "' has no declared eventual behaviour; its language is not computable");
      }
      const Word w = generator_window(gen, sub.alphabet(), from, to);
      words = factors(w, len);
      break;
    }
  }
  return {words.begin(), words.end()};
}

std::vector<std::size_t> complexity_profile(const Subshift& sub, int n_max) {
  if (n_max < 1) throw InputError("n_max must be positive");
  std::vector<std::size_t> p;
  for (int n = 1; n <= n_max; ++n) p.push_back(language(sub, n).size());
  return p;
}

std::optional<double> expansivity_constant(const Subshift& sub) {
  const auto words = language(sub, 1);
  if (words.empty()) throw PreconditionError("subshift is empty");
  // One symbol means the single constant sequence.
  if (words.size() == 1) return std::nullopt;
  return 0.5;
}

std::string to_string(Countability c) {
  switch (c) {
    case Countability::countable: return "countable";
    case Countability::uncountable: return "uncountable";
    case Countability::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(RNVerdict v) {
  switch (v) {
    case RNVerdict::rn: return "RN";
    case RNVerdict::not_rn: return "not-RN";
    case RNVerdict::unknown: return "unknown";
  }
  return "unknown";
}

ClassificationResult classify_countability(const Subshift& sub, int depth) {
  if (depth < 1) throw InputError("classification depth must be positive");
  ClassificationResult res;
  res.depth = depth;
  auto set = [&](Countability c, std::string rule) {
    res.countability = c;
    res.rn = c == Countability::countable ? RNVerdict::rn : c == Countability::uncountable ? RNVerdict::not_rn : RNVerdict::unknown;
    res.rule = std::move(rule);
  };

  switch (sub.kind()) {
    case SubshiftKind::full:
    case SubshiftKind::sft: {
      const FollowerGraph g = follower_graph(sub.kind() == SubshiftKind::full ? Subshift::sft(sub.alphabet(), {}) : sub);
      if (g.vertices.empty()) {
        set(Countability::countable, "sft-cycle-analysis");
        res.evidence.push_back("empty subshift");
        return res;
      }
      int count = 0;
      const auto comp = strongly_connected_components(g.out, count);
      std::vector<std::size_t> vertices(static_cast<std::size_t>(count), 0), edges(static_cast<std::size_t>(count), 0);
      bool cross_edges = false;
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        ++vertices[static_cast<std::size_t>(comp[v])];
        for (std::size_t w : g.out[v]) {
          if (comp[w] == comp[v]) {
            ++edges[static_cast<std::size_t>(comp[v])];
          } else {
            cross_edges = true;
          }
        }
      }
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto c = static_cast<std::size_t>(comp[v]);
        if (edges[c] <= vertices[c]) continue;
        std::vector<std::size_t> inside;
        for (std::size_t w : g.out[v])
          if (comp[w] == comp[v]) inside.push_back(w);
        if (inside.size() < 2) continue;
        set(Countability::uncountable, "sft-cycle-analysis");
        res.evidence.push_back("vertex '" + g.vertices[v] + "' carries cycles " + cycle_text(g, cycle_through(g, v, inside[0])) +
                               " and " + cycle_text(g, cycle_through(g, v, inside[1])));
        return res;
      }
      set(Countability::countable, "sft-cycle-analysis");
      std::size_t points = 0;
      std::vector<char> listed(static_cast<std::size_t>(count), 0);
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto c = static_cast<std::size_t>(comp[v]);
        if (listed[c] || edges[c] == 0) continue;
        listed[c] = 1;
        std::size_t next = v;
        for (std::size_t w : g.out[v])
          if (comp[w] == comp[v]) next = w;
        res.evidence.push_back("cycle " + cycle_text(g, cycle_through(g, v, next)));
        points += vertices[c];
      }
      res.evidence.push_back(cross_edges ? "countably infinite: cycles joined by transient paths"
                                         : "finite: " + std::to_string(points) + " points");
      return res;
    }
    case SubshiftKind::substitution: {
      if (!is_primitive(sub.rules(), sub.alphabet())) {
        set(Countability::unknown, "substitution");
        res.evidence.push_back("substitution is not primitive; no rule applies at depth " + std::to_string(depth));
        return res;
      }
      const Word prefix = substitution_prefix(sub.rules(), 4 * static_cast<std::size_t>(depth));
      const auto period = smallest_period(prefix, static_cast<std::size_t>(depth));
      if (period) {
        set(Countability::countable, "primitive-periodic-substitution");
        res.evidence.push_back("fixed-point prefix has period " + std::to_string(*period));
      } else {
        set(Countability::uncountable, "primitive-aperiodic-substitution");
        res.evidence.push_back("prefix of length " + std::to_string(prefix.size()) + " has no period <= " +
                               std::to_string(depth) + ": " + prefix.substr(0, 32) + "...");
      }
      return res;
    }
    case SubshiftKind::sturmian:
      set(Countability::uncountable, "sturmian");
      res.evidence.push_back("coding of an irrational rotation: minimal and aperiodic");
      return res;
    case SubshiftKind::explicit_generator: {
      const ExplicitGenerator& gen = sub.generator();
      if (gen.tails) {
        const auto& t = *gen.tails;
        for (std::int64_t n = t.left_from - depth; n <= t.left_from; ++n) {
          if (gen.fn(n) != gen.fn(n - t.left_period)) throw InputError("generator contradicts its left-tail declaration at " + std::to_string(n));
        }
        for (std::int64_t n = t.right_from; n <= t.right_from + depth; ++n) {
          if (gen.fn(n) != gen.fn(n + t.right_period)) throw InputError("generator contradicts its right-tail declaration at " + std::to_string(n));
        }
        set(Countability::countable, "eventually-periodic");
        res.evidence.push_back("tails verified to depth " + std::to_string(depth) + ": left period " +
                               std::to_string(t.left_period) + ", right period " + std::to_string(t.right_period));
        return res;
      }
      if (gen.recurrence) {
        const Word w = generator_window(gen, sub.alphabet(), 0, 4 * static_cast<std::int64_t>(depth) - 1);
        const auto period = smallest_period(w, static_cast<std::size_t>(depth));
        if (period) {
          set(Countability::countable, "uniformly-recurrent-periodic");
          res.evidence.push_back("period " + std::to_string(*period));
        } else {
          set(Countability::uncountable, "uniformly-recurrent-aperiodic");
          res.evidence.push_back("recurrent window " + w.substr(0, 32) + "... has no period <= " + std::to_string(depth));
        }
        return res;
      }
      set(Countability::unknown, "explicit");
      res.evidence.push_back("depth exhausted: no eventual-behaviour declaration to certify at depth " + std::to_string(depth));
      return res;
    }
  }
  return res;
}

std::vector<Word> sample_windows(const Subshift& sub, int depth) {
  const std::int64_t d = depth;
  std::vector<Word> windows;
  auto from_source = [&](const SymbolSource& src, const std::vector<std::int64_t>& offsets) {
    for (std::int64_t o : offsets) {
      Word w;
      for (std::int64_t k = o - d; k <= o + d; ++k) w.push_back(static_cast<char>('0' + src.at(k)));
      windows.push_back(std::move(w));
    }
  };
  const std::vector<std::int64_t> offsets{-4 * d, -2 * d, -d, -d / 2, -1, 0, 1, d / 2, d, 2 * d, 4 * d};
  if (sub.kind() != SubshiftKind::sft) {
    const auto src = subshift_point(sub, 8 * d + 1);
    from_source(*src, offsets);
    return windows;
  }
  const FollowerGraph g = follower_graph(sub);
  int count = 0;
  const auto comp = strongly_connected_components(g.out, count);
  // One representative cycle per cyclic component.
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<char> listed(static_cast<std::size_t>(count), 0);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto c = static_cast<std::size_t>(comp[v]);
    if (listed[c]) continue;
    for (std::size_t w : g.out[v]) {
      if (comp[w] == comp[v]) {
        listed[c] = 1;
        cycles.push_back(cycle_through(g, v, w));
        break;
      }
    }
  }
  auto vertex_symbol = [&](std::size_t v) { return static_cast<int>(g.vertices[v][0] - '0'); };
  for (const auto& a : cycles) {
    for (const auto& b : cycles) {
      std::vector<std::size_t> path;
      if (&a != &b) {
        path = shortest_path(g.out, a[0], b[0]);
        if (path.empty()) continue;
      }
      const auto pa = static_cast<std::int64_t>(a.size());
      const auto pb = static_cast<std::int64_t>(b.size());
      const auto plen = static_cast<std::int64_t>(path.size());
      // Cycle a up to position 0, then the path, then cycle b.
      FunctionSource src(
          [&, pa, pb, plen](std::int64_t t) {
            if (&a == &b || t <= 0) return vertex_symbol(a[static_cast<std::size_t>(((t % pa) + pa) % pa)]);
            if (t < plen) return vertex_symbol(path[static_cast<std::size_t>(t)]);
            const std::int64_t s = t - (plen - 1);
            return vertex_symbol(b[static_cast<std::size_t>(s % pb)]);
          },
          "sft-walk");
      from_source(src, &a == &b ? std::vector<std::int64_t>{0} : offsets);
    }
  }
  return windows;
}

PeriodicityCheck recurrent_periodicity_check(const Subshift& sub, int depth) {
  if (depth < 8) throw InputError("periodicity check needs depth >= 8");
  const auto cls = classify_countability(sub, depth);
  if (cls.rn != RNVerdict::rn) {
    throw PreconditionError("recurrent_periodicity_check requires an RN (countable) subshift; classified " + to_string(cls.rn));
  }
  PeriodicityCheck check;
  const auto d = static_cast<std::size_t>(depth);
  const std::size_t half = std::max<std::size_t>(1, d / 8);
  const std::size_t gap = d / 4;
  for (const Word& w : sample_windows(sub, depth)) {
    ++check.sampled;
    const Word block = w.substr(d - half, 2 * half + 1);
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i + block.size() <= w.size(); ++i) {
      if (w.compare(i, block.size(), block) == 0) hits.push_back(i);
    }
    bool recurrent = hits.size() >= 2 && hits.front() <= gap && hits.back() + block.size() + gap >= w.size();
    for (std::size_t k = 1; k < hits.size() && recurrent; ++k) recurrent = hits[k] - hits[k - 1] <= gap;
    if (!recurrent) continue;
    ++check.recurrent;
    // Periodicity is judged on the middle half, where recurrence was observed on both sides.
    const Word middle = w.substr(d / 2, d + 1);
    if (smallest_period(middle, d / 4)) {
      ++check.periodic;
    } else {
      check.violations.push_back("recurrent window without period <= " + std::to_string(d / 4) + ": " + middle.substr(0, 48));
    }
  }
  return check;
}

int morse_symbol(std::int64_t n) {
  const auto k = static_cast<std::uint64_t>(n >= 0 ? n : -n - 1);
  return std::popcount(k) & 1;
}

Subshift morse_generator() {
  ExplicitGenerator gen;
  gen.fn = morse_symbol;
  gen.label = "morse";
  gen.recurrence = RecurrenceDeclaration{[](std::int64_t n) { return 32 * n + 32; }};
  return Subshift::explicit_generator(2, std::move(gen));
}

int sturmian_symbol(long double alpha, long double theta, std::int64_t k) {
  const long double v = frac_l(theta + static_cast<long double>(k) * alpha);
  return v >= 1.0L - alpha ? 1 : 0;
}

SourcePtr champernowne_source() { return champernowne(2); }

SourcePtr subshift_point(const Subshift& sub, std::int64_t reach) {
  switch (sub.kind()) {
    case SubshiftKind::full:
      return champernowne(sub.alphabet());
    case SubshiftKind::sturmian: {
      const long double alpha = sub.alpha().value();
      const long double theta = sub.intercept();
      return std::make_shared<FunctionSource>([alpha, theta](std::int64_t k) { return sturmian_symbol(alpha, theta, k); },
                                              "sturmian");
    }
    case SubshiftKind::explicit_generator:
      return std::make_shared<FunctionSource>(sub.generator().fn, sub.generator().label);
    case SubshiftKind::substitution: {
      // w = lim s^j(b) . lim s^j(a) for a power s of the substitution with
      // s(a) starting with a, s(b) ending with b and "ba" admissible.
      const auto& rules = sub.rules();
      const auto legal = language(sub, 2);
      for (int power = 1; power <= 2 * sub.alphabet(); ++power) {
        for (int a = 0; a < sub.alphabet(); ++a) {
          for (int b = 0; b < sub.alphabet(); ++b) {
            const char ca = static_cast<char>('0' + a);
            const char cb = static_cast<char>('0' + b);
            if (!std::binary_search(legal.begin(), legal.end(), Word{cb, ca})) continue;
            Word ra(1, ca), rb(1, cb);
            for (int i = 0; i < power; ++i) {
              ra = apply_substitution(rules, ra);
              rb = apply_substitution(rules, rb);
            }
            if (ra.front() != ca || rb.back() != cb || ra.size() < 2 || rb.size() < 2) continue;
            Word right(1, ca), left(1, cb);
            while (static_cast<std::int64_t>(right.size()) <= reach || static_cast<std::int64_t>(left.size()) <= reach) {
              for (int i = 0; i < power; ++i) {
                right = apply_substitution(rules, right);
                left = apply_substitution(rules, left);
              }
            }
            std::vector<int> symbols(static_cast<std::size_t>(2 * reach + 1));
            for (std::int64_t k = -reach; k <= reach; ++k) {
              const char c = k >= 0 ? right[static_cast<std::size_t>(k)] : left[left.size() - static_cast<std::size_t>(-k)];
              symbols[static_cast<std::size_t>(k + reach)] = c - '0';
            }
            return buffered_source(std::move(symbols), reach, "substitution-fixed-point");
          }
        }
      }
      throw InputError("substitution has no two-sided fixed point for a small power");
    }
    case SubshiftKind::sft: {
      const FollowerGraph g = follower_graph(sub);
      if (g.vertices.empty()) throw PreconditionError("SFT is empty");
      // Deterministic pseudo-random walk in both directions from vertex 0.
      auto pick = [](std::int64_t t, std::size_t n) {
        std::uint64_t h = static_cast<std::uint64_t>(t) + 0x9E3779B97F4A7C15ull;
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
        h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
        h ^= h >> 31;
        return static_cast<std::size_t>(h % n);
      };
      std::vector<int> symbols(static_cast<std::size_t>(2 * reach + 1));
      std::size_t v = 0;
      for (std::int64_t t = 0; t <= reach; ++t) {
        symbols[static_cast<std::size_t>(t + reach)] = g.vertices[v][0] - '0';
        v = g.out[v][pick(t, g.out[v].size())];
      }
      v = 0;
      for (std::int64_t t = -1; t >= -reach; --t) {
        v = g.in[v][pick(t, g.in[v].size())];
        symbols[static_cast<std::size_t>(t + reach)] = g.vertices[v][0] - '0';
      }
      return buffered_source(std::move(symbols), reach, "sft-walk");
    }
  }
  throw InputError("unsupported subshift kind");
}

System shift_system(std::string name, int alphabet, int window, std::vector<SourcePtr> sources) {
  auto space = std::make_shared<SequenceSpace>(alphabet, window, std::move(sources));
  auto step = [](std::int64_t by) {
    return [by](const Point& p) { return Point::symbolic(p.source, p.index + by); };
  };
  System sys(
      std::move(name), space, step(1), step(-1), {},
      [](const Point& p, std::int64_t n) { return Point::symbolic(p.source, p.index + n); });
  // The nearest difference to the origin can be moved within N of it.
  sys.set_horizon_distance([space](const Point& x, const Point& y, std::int64_t n) {
    const auto k = space->first_difference(x, y, space->window() + n);
    if (!k) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(std::max<std::int64_t>(0, *k - n)));
  });
  sys.description = "shift on " + std::to_string(alphabet) + " symbols, window " + std::to_string(window);
  return sys;
}

double TwoArrowsModel::project(const Point& p) const {
  const long double beta = on_orbit(p) ? 0.0L : intercepts[static_cast<std::size_t>(p.source)];
  return static_cast<double>(frac_l(beta + static_cast<long double>(p.index) * alpha.value()));
}

TwoArrowsModel sturmian_two_arrows(const ContinuedFraction& alpha, std::int64_t depth, std::int64_t orbit_reach,
                                   int generic) {
  if (alpha.terms.size() < 2 || alpha.terms[0] != 0) throw InputError("two-arrows angle must be [0; a1, a2, ...]");
  const auto conv = alpha.convergents();
  if (conv.back().second <= depth) {
    throw InputError("convergent stream too short for depth " + std::to_string(depth));
  }
  const long double a = alpha.value();
  std::vector<SourcePtr> sources;
  // Orbit points hit the partition boundary {0, 1-alpha} exactly at global
  // index 0 and -1; the two conventions differ only there.
  sources.push_back(std::make_shared<FunctionSource>(
      [a](std::int64_t g) { return g == 0 ? 0 : g == -1 ? 1 : sturmian_symbol(a, 0.0L, g); }, "orbit+"));
  sources.push_back(std::make_shared<FunctionSource>(
      [a](std::int64_t g) { return g == 0 ? 1 : g == -1 ? 0 : sturmian_symbol(a, 0.0L, g); }, "orbit-"));
  constexpr int kWindow = 1000;
  auto window_of = [](const SymbolSource& src, std::int64_t offset) {
    std::string w;
    for (std::int64_t k = -kWindow; k <= kWindow; ++k) w.push_back(static_cast<char>('0' + src.at(offset + k)));
    return w;
  };
  std::vector<Point> pts;
  std::unordered_set<std::string> seen;
  for (std::int64_t m = -orbit_reach; m <= orbit_reach; ++m) {
    for (std::int32_t tag : {TwoArrowsModel::kPlus, TwoArrowsModel::kMinus}) {
      if (seen.insert(window_of(*sources[static_cast<std::size_t>(tag)], m)).second) pts.push_back(Point::symbolic(tag, m));
    }
  }
  // Off-orbit samples keep a margin from the low-index orbit points, where the
  // limit maps of small gammas are discontinuous, and must be distinguishable
  // from every other sample within the window.
  std::vector<long double> intercepts{0.0L, 0.0L};
  auto clear_of_orbit = [a](long double beta) {
    for (std::int64_t j = -16; j <= 16; ++j) {
      const long double d = frac_l(beta - j * a);
      if (std::min(d, 1.0L - d) < 1.0L / 128) return false;
    }
    return true;
  };
  for (int i = 0, t = 1; i < generic && t < 100 * generic + 1000; ++t) {
    const long double beta = frac_l(0.1234567L + t * (std::numbers::sqrt3_v<long double> - 1.0L) / 7.0L);
    if (!clear_of_orbit(beta)) continue;
    auto src = std::make_shared<FunctionSource>([a, beta](std::int64_t g) { return sturmian_symbol(a, beta, g); },
                                                "generic");
    if (!seen.insert(window_of(*src, 0)).second) continue;
    pts.push_back(Point::symbolic(static_cast<std::int32_t>(sources.size()), 0));
    intercepts.push_back(beta);
    sources.push_back(std::move(src));
    ++i;
  }
  System sys = shift_system("two-arrows", 2, kWindow, sources);
  sys.description = "Sturmian coding of rotation by alpha with +/- closure conventions";

  // Resolution: codings agreeing on half the window share a ball.
  SampleCloud cloud = make_cloud(sys.space_ptr(), std::move(pts), std::ldexp(1.0, -kWindow / 2));
  cloud.provenance.note = "orbit points |m| <= " + std::to_string(orbit_reach) + " with both tags, " +
                          std::to_string(intercepts.size() - 2) + " off-orbit intercepts";
  TwoArrowsModel model{alpha, std::move(sys), std::move(cloud), std::move(intercepts)};
  return model;
}

}  // namespace dynlab
