// common.hpp
//
// Shared plumbing for the primecorr library: error types with the exit-code
// contract used by the CLI, compensated summation, a small deterministic
// PRNG for randomized grids, and a chunked parallel runner whose reduction
// order is fixed so results are reproducible at any thread count.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace primecorr {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;

// Parameter violations; CLI maps these to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Work/memory budget exceeded; CLI maps these to exit code 3.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (quadrature non-convergence, interval blowup); exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Neumaier compensated accumulator.
struct kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

// splitmix64: tiny deterministic generator, stable across platforms.
struct splitmix64 {
  u64 state;

  explicit splitmix64(u64 seed) : state(seed) {}

  u64 next() {
    state += 0x9e3779b97f4a7c15ULL;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n); modulo bias is irrelevant for test grids.
  u64 below(u64 n) { return next() % n; }
};

inline constexpr u64 k_correlation_budget = 100'000'000;  // X and h caps

inline u64 isqrt_u64(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Runs f(i) for i in [0, tasks) on up to `threads` workers.  Callers write
// results into preallocated per-index slots and reduce in index order, so the
// outcome does not depend on scheduling.
template <class F>
void parallel_for(u64 tasks, unsigned threads, F&& f) {
  if (tasks == 0) return;
  if (threads <= 1 || tasks == 1) {
    for (u64 i = 0; i < tasks; ++i) f(i);
    return;
  }
  unsigned n = static_cast<unsigned>(std::min<u64>(threads, tasks));
  std::atomic<u64> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  std::exception_ptr err;
  std::mutex err_mutex;
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        u64 i = next.fetch_add(1);
        if (i >= tasks) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace primecorr
