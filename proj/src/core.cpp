#include "dynlab/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace dynlab {
namespace {

std::atomic<unsigned> g_threads{1};

}  // namespace

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  if (p.source == kArcSource) {
    os << "arc[" << p.index << "]";
  } else if (p.source != 0 || p.index != 0) {
    os << "seq[src=" << p.source << ",off=" << p.index << "]";
  } else {
    os << "(" << p.x[0] << ", " << p.x[1] << ")";
  }
  return os.str();
}

void set_thread_count(unsigned n) { g_threads.store(std::max(1u, n)); }

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    // Small fixed-size chunks; which thread runs which index is irrelevant to
    // the result since every index owns its output slot.
    constexpr std::size_t kChunk = 16;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> default_epsilon_grid(double diameter) {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(diameter * std::ldexp(1.0, -k));
  return grid;
}

}  // namespace dynlab
