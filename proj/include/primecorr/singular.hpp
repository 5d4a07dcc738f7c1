// singular.hpp
//
// Hardy-Littlewood singular series S_h for prime pairs, the secondary
// correction factor kappa attached to a real primitive character (twin and
// Goldbach variants), predicted main terms, and the weighted average of S_h
// whose normalized value tends to 1.

#pragma once

#include <cmath>
#include <mutex>
#include <vector>

#include "primecorr/arith.hpp"
#include "primecorr/characters.hpp"
#include "primecorr/common.hpp"

namespace primecorr {

struct euler_product {
  double value = 0.0;
  double err = 0.0;
};

// 2 * prod_{2 < p <= cutoff} (1 - 1/(p-1)^2), the universal twin-prime factor.
// Tail over p > cutoff multiplies by something in [1 - 1/(cutoff-2), 1].
inline euler_product twin_constant(u64 cutoff = 10'000'000) {
  static std::mutex mtx;
  static u64 cached_cutoff = 0;
  static euler_product cached;

  {
    std::lock_guard<std::mutex> lk(mtx);
    if (cutoff == cached_cutoff) return cached;
  }
  if (cutoff < 100'000)
    throw validation_error("twin_constant: prime cutoff below 1e5");
  auto primes = base_primes(cutoff);
  kahan logsum;
  for (u32 p : *primes) {
    if (p == 2 || p > cutoff) continue;
    double pm1 = static_cast<double>(p) - 1.0;
    logsum.add(std::log1p(-1.0 / (pm1 * pm1)));
  }
  euler_product out;
  out.value = 2.0 * std::exp(logsum.total());
  out.err = out.value / (static_cast<double>(cutoff) - 2.0);
  {
    std::lock_guard<std::mutex> lk(mtx);
    cached_cutoff = cutoff;
    cached = out;
  }
  return out;
}

struct singular_value {
  i64 h = 0;
  double value = 0.0;
  double err = 0.0;
};

// S_h = 1_{2|h} * twin_constant * prod_{p|h, p>2} (1 + 1/(p-2)).
// The h-dependent factor is a finite product, evaluated exactly.
inline singular_value singular_series(i64 h, u64 prime_cutoff = 10'000'000) {
  if (h == 0) throw validation_error("singular_series: need h != 0");
  singular_value out;
  out.h = h;
  if (h % 2 != 0) return out;  // odd h: exactly zero
  euler_product base = twin_constant(prime_cutoff);
  u64 ha = static_cast<u64>(h < 0 ? -h : h);
  double factor = 1.0;
  for (auto [p, e] : factorize(ha)) {
    if (p > 2) factor *= 1.0 + 1.0 / (static_cast<double>(p) - 2.0);
  }
  out.value = base.value * factor;
  out.err = base.err * factor;
  return out;
}

enum class pair_kind { twin, goldbach };

struct correction {
  i64 h = 0;
  pair_kind mode = pair_kind::twin;
  double kappa = 1.0;
};

// kappa = 1 + [chi(-1) in goldbach mode] * 1_{phi(2^r) | h} * (-1)^{h/phi(2^r)}
//           * prod_{p | q', p not | h} (-1)/(p-2).
// phi(2^0) = 1, so for even h the indicator is 1 and the power is +1.
inline correction correction_factor(i64 h, const quad_char& chi, pair_kind mode) {
  if (h % 2 != 0)
    throw validation_error("correction_factor: h must be even");
  correction out;
  out.h = h;
  out.mode = mode;
  u64 phi2r = chi.r == 0 ? 1 : (u64(1) << (chi.r - 1));
  u64 ha = static_cast<u64>(h < 0 ? -h : h);
  double term = 0.0;
  if (ha % phi2r == 0) {
    term = ((ha / phi2r) % 2 == 0) ? 1.0 : -1.0;
    for (auto [p, e] : factorize(chi.q_odd)) {
      if (ha % p != 0) term *= -1.0 / (static_cast<double>(p) - 2.0);
    }
  }
  if (mode == pair_kind::goldbach) term *= chi.parity;
  out.kappa = 1.0 + term;
  return out;
}

// Main-term prediction: S_h * scale * kappa.  Without a character the
// unconditional Hardy-Littlewood prediction (kappa = 1) is returned.
inline double predicted_main(pair_kind kind, double scale, i64 h,
                             const quad_char* chi = nullptr,
                             u64 prime_cutoff = 10'000'000) {
  singular_value s = singular_series(h, prime_cutoff);
  double kappa = 1.0;
  if (chi != nullptr && h % 2 == 0) kappa = correction_factor(h, *chi, kind).kappa;
  return s.value * scale * kappa;
}

// sum_{0 < |h| <= H, h even} (H - |h|) S_h, direct route.
inline double avg_singular_series_direct(u64 H, u64 prime_cutoff = 10'000'000) {
  if (H < 2) throw validation_error("avg_singular_series: need H >= 2");
  euler_product base = twin_constant(prime_cutoff);
  // smallest odd prime factor products via a sieve over even h
  std::vector<double> factor(H / 2 + 1, 1.0);
  auto primes = base_primes(H / 2 + 1);
  for (u32 p : *primes) {
    if (p == 2) continue;
    if (p > H / 2) break;
    double f = 1.0 + 1.0 / (static_cast<double>(p) - 2.0);
    for (u64 m = p; m <= H / 2; m += p) factor[m] *= f;
  }
  kahan acc;
  for (u64 h = 2; h <= H; h += 2) {
    double w = static_cast<double>(H - h);
    if (w == 0.0) continue;
    acc.add(2.0 * w * factor[h / 2]);  // h and -h
  }
  return base.value * acc.total();
}

// Same sum rearranged through the multiplicative function
// f(r) = mu^2(r) 1_{2 not| r} prod_{p|r} 1/(p-2):
// sum_h (H-|h|) F(h) = 2 sum_{j=1..H} sum_{r <= (j-1)/2} f(r) floor(((j-1)/2)/r).
inline double avg_singular_series_rearranged(u64 H, u64 prime_cutoff = 10'000'000) {
  if (H < 2) throw validation_error("avg_singular_series: need H >= 2");
  euler_product base = twin_constant(prime_cutoff);
  u64 half = (H - 1) / 2;
  std::vector<double> f(half + 1, 0.0);
  if (half >= 1) f[1] = 1.0;
  // build f multiplicatively: squarefree odd r only
  if (half >= 1) {
    auto primes = base_primes(half + 1);
    std::vector<double> fv(half + 1, 1.0);
    std::vector<u8> ok(half + 1, 1);
    for (u32 p : *primes) {
      if (p > half) break;
      u64 p64 = p;
      double w = (p == 2) ? 0.0 : 1.0 / (static_cast<double>(p) - 2.0);
      for (u64 m = p64; m <= half; m += p64) {
        if (p == 2 || (m / p64) % p64 == 0)
          ok[m] = 0;  // even or not squarefree
        else
          fv[m] *= w;
      }
    }
    for (u64 r = 1; r <= half; ++r) f[r] = ok[r] ? fv[r] : 0.0;
  }
  kahan acc;
  for (u64 j = 1; j <= H; ++j) {
    u64 half_j = (j - 1) / 2;
    kahan inner;
    for (u64 r = 1; r <= half_j; ++r) {
      if (f[r] == 0.0) continue;
      inner.add(f[r] * static_cast<double>(half_j / r));
    }
    acc.add(2.0 * inner.total());
  }
  return base.value * acc.total();
}

// Both routes must agree; returns the direct evaluation.
inline double avg_singular_series(u64 H, u64 prime_cutoff = 10'000'000) {
  double a = avg_singular_series_direct(H, prime_cutoff);
  double b = avg_singular_series_rearranged(H, prime_cutoff);
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) > 1e-9 * scale)
    throw numeric_error("avg_singular_series: direct and rearranged routes disagree");
  return a;
}

}  // namespace primecorr
