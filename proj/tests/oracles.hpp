#pragma once

// Brute-force reference computations, written independently of the library
// code paths they are compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// (eps, r)-fragmentation by definition: every nonempty subset A has some
/// x in A with rho-diam(A ∩ B(x, r)) <= eps. Exponential in n.
inline bool fragmented_by_subsets(const std::vector<std::vector<double>>& d, const std::vector<std::vector<double>>& rho,
                                  double eps, double r) {
  const std::size_t n = d.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool found = false;
    for (std::size_t x = 0; x < n && !found; ++x) {
      if (!(mask >> x & 1u)) continue;
      double diam = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        if (!(mask >> a & 1u) || d[x][a] > r) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if ((mask >> b & 1u) && d[x][b] <= r) diam = std::max(diam, rho[a][b]);
        }
      }
      found = diam <= eps;
    }
    if (!found) return false;
  }
  return true;
}

/// Cat map [[2,1],[1,1]] on the lattice (Z/m)^2, exact.
struct LatticeCat {
  int m;
  std::pair<int, int> forward(std::pair<int, int> p) const { return {(2 * p.first + p.second) % m, (p.first + p.second) % m}; }
  std::pair<int, int> inverse(std::pair<int, int> p) const {
    return {((p.first - p.second) % m + m) % m, ((2 * p.second - p.first) % m + m) % m};
  }
  double dist(std::pair<int, int> a, std::pair<int, int> b) const {
    auto arc = [&](int u, int v) {
      const int k = std::abs(u - v) % m;
      return static_cast<double>(std::min(k, m - k)) / m;
    };
    return std::max(arc(a.first, b.first), arc(a.second, b.second));
  }
  double d_H(std::pair<int, int> a, std::pair<int, int> b, int n) const {
    double best = dist(a, b);
    auto fa = a, fb = b, ia = a, ib = b;
    for (int k = 1; k <= n; ++k) {
      fa = forward(fa);
      fb = forward(fb);
      ia = inverse(ia);
      ib = inverse(ib);
      best = std::max({best, dist(fa, fb), dist(ia, ib)});
    }
    return best;
  }
};

/// Thue-Morse prefix by iterating 0 -> 01, 1 -> 10 on strings.
inline std::string morse_prefix(std::size_t length) {
  std::string w = "0";
  while (w.size() < length) {
    std::string next;
    for (char c : w) next += c == '0' ? "01" : "10";
    w = next;
  }
  return w.substr(0, length);
}

/// Distinct length-n factors of a finite word.
inline std::size_t factor_count(const std::string& w, std::size_t n) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i + n <= w.size(); ++i) seen.insert(w.substr(i, n));
  return seen.size();
}

/// Mechanical word floor((k+1)a + t) - floor(k a + t), k = 0..len-1.
inline std::string mechanical_word(long double a, long double t, std::size_t len) {
  std::string w;
  for (std::size_t k = 0; k < len; ++k) {
    const long double v = std::floor((k + 1) * a + t) - std::floor(k * a + t);
    w += v > 0.5L ? '1' : '0';
  }
  return w;
}

}  // namespace oracle
