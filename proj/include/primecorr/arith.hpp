// arith.hpp
//
// Segmented sieving of the basic arithmetic functions (smallest prime factor,
// von Mangoldt, Moebius, divisor count) over an integer window, rough-number
// masks relative to a sieving level z, and exact evaluation of the small
// multiplicative functions (phi, tau^m, n/phi(n)) used by the prediction
// formulas.  Segments are immutable after construction and safe to share.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "primecorr/common.hpp"

namespace primecorr {

inline constexpr u64 k_segment_budget = u64(1) << 24;

// Process-wide cache of the base primes, grown on demand.
inline std::shared_ptr<const std::vector<u32>> base_primes(u64 limit) {
  static std::mutex mtx;
  static std::shared_ptr<const std::vector<u32>> cache;
  static u64 cache_limit = 0;

  std::lock_guard<std::mutex> lk(mtx);
  if (limit <= cache_limit && cache) return cache;
  u64 want = std::max<u64>(limit, 1u << 16);
  if (want > 400'000'000ULL)
    throw budget_error("base_primes: limit " + std::to_string(want) +
                       " exceeds budget 4e8");
  std::vector<u8> comp(want + 1, 0);
  auto primes = std::make_shared<std::vector<u32>>();
  for (u64 i = 2; i <= want; ++i) {
    if (comp[i]) continue;
    primes->push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= want; j += i) comp[j] = 1;
  }
  cache = primes;
  cache_limit = want;
  return cache;
}

// Arithmetic-function tables over the half-open window [lo, hi).
struct arith_segment {
  u64 lo = 1, hi = 2;
  std::vector<u64> spf;    // smallest prime factor; spf(1) = 1
  std::vector<double> vm;  // von Mangoldt, natural log; vm(1) = 0
  std::vector<int8_t> mu;  // Moebius in {-1, 0, 1}; mu(1) = 1
  std::vector<u32> tau;    // divisor count; tau(1) = 1

  std::size_t idx(u64 n) const { return static_cast<std::size_t>(n - lo); }
  u64 spf_at(u64 n) const { return spf[idx(n)]; }
  double vm_at(u64 n) const { return vm[idx(n)]; }
  int mu_at(u64 n) const { return mu[idx(n)]; }
  u32 tau_at(u64 n) const { return tau[idx(n)]; }
};

inline arith_segment build_segment(u64 lo, u64 hi) {
  if (lo < 1 || hi <= lo)
    throw validation_error("build_segment: need 1 <= lo < hi");
  u64 len = hi - lo;
  if (len > k_segment_budget)
    throw budget_error("build_segment: segment length " + std::to_string(len) +
                       " exceeds budget 2^24 = " +
                       std::to_string(k_segment_budget) + " entries");

  arith_segment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.spf.assign(len, 0);
  seg.vm.assign(len, 0.0);
  seg.mu.assign(len, 1);
  seg.tau.assign(len, 1);

  // rem[i] = unfactored part of n, first[i] = smallest prime seen,
  // pure[i] = 1 while n has a single distinct prime so far.
  std::vector<u64> rem(len);
  std::vector<u8> pure(len, 1);
  for (u64 i = 0; i < len; ++i) rem[i] = lo + i;

  auto primes = base_primes(isqrt_u64(hi - 1));
  for (u32 p : *primes) {
    u64 p64 = p;
    if (p64 * p64 >= hi) break;
    u64 start = ((lo + p64 - 1) / p64) * p64;
    for (u64 n = start; n < hi; n += p64) {
      u64 i = n - lo;
      int e = 0;
      while (rem[i] % p64 == 0) {
        rem[i] /= p64;
        ++e;
      }
      if (e == 0) continue;
      if (seg.spf[i] == 0)
        seg.spf[i] = p64;
      else
        pure[i] = 0;
      seg.tau[i] *= static_cast<u32>(e + 1);
      seg.mu[i] = (e >= 2) ? 0 : static_cast<int8_t>(-seg.mu[i]);
      if (pure[i] && rem[i] == 1) seg.vm[i] = std::log(static_cast<double>(p64));
    }
  }
  for (u64 i = 0; i < len; ++i) {
    u64 n = lo + i;
    if (n == 1) {
      seg.spf[i] = 1;
      continue;
    }
    if (rem[i] > 1) {
      // leftover prime factor > sqrt(hi), exponent 1
      if (seg.spf[i] == 0) {
        seg.spf[i] = rem[i];  // n itself is prime
        seg.vm[i] = std::log(static_cast<double>(n));
      } else {
        pure[i] = 0;
        seg.vm[i] = 0.0;
      }
      seg.tau[i] *= 2;
      seg.mu[i] = (seg.mu[i] == 0) ? 0 : static_cast<int8_t>(-seg.mu[i]);
    } else if (!pure[i]) {
      seg.vm[i] = 0.0;
    }
  }
  return seg;
}

// Indicator of "no prime factor p < z with p not dividing k" over [lo, hi).
struct rough_mask {
  double z = 2.0;
  u64 k = 1;
  u64 lo = 1, hi = 2;
  std::vector<u8> flags;

  bool at(u64 n) const { return flags[static_cast<std::size_t>(n - lo)] != 0; }
};

inline rough_mask make_rough_mask(u64 lo, u64 hi, double z, u64 k) {
  if (!(z > 1.0)) throw validation_error("rough_mask: need z > 1");
  if (k < 1) throw validation_error("rough_mask: need k >= 1");
  if (lo < 1 || hi <= lo) throw validation_error("rough_mask: need 1 <= lo < hi");
  u64 len = hi - lo;
  if (len > k_segment_budget)
    throw budget_error("rough_mask: window length exceeds budget 2^24 entries");

  rough_mask m;
  m.z = z;
  m.k = k;
  m.lo = lo;
  m.hi = hi;
  m.flags.assign(len, 1);
  u64 zc = static_cast<u64>(std::ceil(z));
  auto primes = base_primes(zc);
  for (u32 p : *primes) {
    if (!(static_cast<double>(p) < z)) break;
    if (k % p == 0) continue;
    u64 p64 = p;
    u64 start = ((lo + p64 - 1) / p64) * p64;
    for (u64 n = start; n < hi; n += p64) m.flags[n - lo] = 0;
  }
  return m;
}

// Trial-division factorization (distinct prime, exponent) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<std::pair<u64, int>> out;
  if (n <= 1) return out;
  auto primes = base_primes(isqrt_u64(n));
  u64 m = n;
  for (u32 p : *primes) {
    u64 p64 = p;
    if (p64 * p64 > m) break;
    if (m % p64) continue;
    int e = 0;
    while (m % p64 == 0) {
      m /= p64;
      ++e;
    }
    out.emplace_back(p64, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

enum class mult_fn { phi, tau_power, n_over_phi };

inline double multiplicative_eval(mult_fn f, u64 n, int power = 1) {
  if (n < 1) throw validation_error("multiplicative_eval: need n >= 1");
  auto fac = factorize(n);
  switch (f) {
    case mult_fn::phi: {
      u64 v = n;
      for (auto [p, e] : fac) v -= v / p;
      return static_cast<double>(v);
    }
    case mult_fn::tau_power: {
      double t = 1.0;
      for (auto [p, e] : fac) t *= static_cast<double>(e + 1);
      return std::pow(t, power);
    }
    case mult_fn::n_over_phi: {
      double v = 1.0;
      for (auto [p, e] : fac)
        v *= static_cast<double>(p) / static_cast<double>(p - 1);
      return v;
    }
  }
  throw validation_error("multiplicative_eval: unknown f-spec");
}

inline u64 euler_phi(u64 n) {
  u64 v = n;
  for (auto [p, e] : factorize(n)) v -= v / p;
  return n == 0 ? 0 : v;
}

}  // namespace primecorr
