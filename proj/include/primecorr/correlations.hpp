// correlations.hpp
//
// The empirical sums: von Mangoldt pair correlations and Goldbach sums, the
// lambda = 1*chi and lambda' = chi*log convolutions with their rough-number
// decomposition c_n, exceptional-character diagnostic sums, generalized
// divisor correlations with their predicted main term, and the short-interval
// variance computed exactly by an event sweep.  Summation order is fixed
// (ascending, segment-major, compensated) so every result is reproducible.

#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "primecorr/arith.hpp"
#include "primecorr/characters.hpp"
#include "primecorr/common.hpp"
#include "primecorr/expsums.hpp"
#include "primecorr/rational.hpp"
#include "primecorr/singular.hpp"
#include "primecorr/smooth.hpp"

namespace primecorr {

// lambda(n) = sum_{d|n} chi(d), nonnegative integers, over [lo, hi).
inline std::vector<i64> lambda_seq(const quad_char& chi, u64 lo, u64 hi) {
  if (lo < 1 || hi <= lo) throw validation_error("lambda_seq: need 1 <= lo < hi");
  if (hi - lo > k_segment_budget || hi > k_correlation_budget * 2)
    throw budget_error("lambda_seq: window exceeds budget");
  std::vector<i64> lam(hi - lo, 0);
  for (u64 d = 1; d < hi; ++d) {
    int cd = chi.chi(d);
    if (cd == 0) continue;
    u64 start = ((lo + d - 1) / d) * d;
    for (u64 n = start; n < hi; n += d) lam[n - lo] += cd;
  }
  return lam;
}

// lambda'(n) = sum_{d|n} chi(d) log(n/d), nonnegative reals, over [lo, hi).
inline std::vector<double> lambda_prime_seq(const quad_char& chi, u64 lo, u64 hi) {
  if (lo < 1 || hi <= lo)
    throw validation_error("lambda_prime_seq: need 1 <= lo < hi");
  if (hi - lo > k_segment_budget || hi > k_correlation_budget * 2)
    throw budget_error("lambda_prime_seq: window exceeds budget");
  std::vector<double> lp(hi - lo, 0.0);
  for (u64 d = 1; d < hi; ++d) {
    int cd = chi.chi(d);
    if (cd == 0) continue;
    double c = static_cast<double>(cd);
    u64 start = ((lo + d - 1) / d) * d;
    for (u64 n = start; n < hi; n += d)
      lp[n - lo] += c * std::log(static_cast<double>(n / d));
  }
  return lp;
}

// c_n = sum_{n = km, m >= z, (km, P(z)) = 1} Lambda(k) lambda(m) over [lo,hi).
// include_q additionally demands (km, q) = 1.  The computed values are
// checked against 0 <= c_n <= 1_rough(n) tau(n)^2 log n.
inline std::vector<double> c_seq(const quad_char& chi, double z, u64 lo, u64 hi,
                                 bool include_q) {
  if (lo < 1 || hi <= lo) throw validation_error("c_seq: need 1 <= lo < hi");
  if (hi - lo > k_segment_budget || hi > k_correlation_budget * 2)
    throw budget_error("c_seq: window exceeds budget");
  if (!(z > 1.0)) throw validation_error("c_seq: need z > 1");
  std::vector<double> c(hi - lo, 0.0);
  if (z >= static_cast<double>(hi)) return c;  // m >= z impossible

  u64 mtop = static_cast<u64>(static_cast<double>(hi - 1) / z) + 1;
  mtop = std::min(mtop, hi - 1);
  std::vector<i64> lam = lambda_seq(chi, 1, mtop + 1);
  rough_mask mrough = make_rough_mask(1, mtop + 1, z, 1);

  auto primes = base_primes(hi - 1);
  for (u32 p : *primes) {
    if (!(static_cast<double>(p) >= z)) continue;
    if (static_cast<u64>(p) >= hi) break;
    if (include_q && chi.q % p == 0) continue;
    double lp = std::log(static_cast<double>(p));
    for (u64 k = p; k < hi; k *= p) {
      u64 mlo = (lo + k - 1) / k;
      u64 mhi = (hi - 1) / k;
      for (u64 m = std::max<u64>(2, mlo); m <= mhi; ++m) {
        if (!mrough.at(m)) continue;
        if (!(static_cast<double>(m) >= z)) continue;
        if (include_q && chi.principal(m) == 0) continue;
        if (lam[m - 1] == 0) continue;
        c[k * m - lo] += lp * static_cast<double>(lam[m - 1]);
      }
      if (k > (hi - 1) / p) break;  // avoid overflow on k *= p
    }
  }

  // invariant sweep in small blocks
  for (u64 blo = lo; blo < hi; blo += (u64(1) << 20)) {
    u64 bhi = std::min(hi, blo + (u64(1) << 20));
    arith_segment seg = build_segment(blo, bhi);
    rough_mask rm = make_rough_mask(blo, bhi, z, 1);
    for (u64 n = blo; n < bhi; ++n) {
      double cn = c[n - lo];
      if (cn < 0.0)
        throw numeric_error("c_seq: negative c_n at n = " + std::to_string(n));
      if (cn == 0.0) continue;
      double cap = rm.at(n) ? static_cast<double>(seg.tau_at(n)) *
                                  static_cast<double>(seg.tau_at(n)) *
                                  std::log(static_cast<double>(n))
                            : 0.0;
      if (cn > cap * (1.0 + 1e-9) + 1e-12)
        throw numeric_error("c_seq: c_n exceeds tau^2 log bound at n = " +
                            std::to_string(n));
    }
  }
  return c;
}

// sum_{n <= X} Lambda(n) Lambda(n+h), exact segmented evaluation.
inline double twin_correlation(u64 X, i64 h, unsigned threads = 1) {
  if (X < 1) throw validation_error("twin_correlation: need X >= 1");
  if (h == 0) throw validation_error("twin_correlation: need h != 0");
  u64 ha = static_cast<u64>(h < 0 ? -h : h);
  if (X > k_correlation_budget || ha > 10 * X)
    throw budget_error("twin_correlation: X <= 1e8 and |h| <= 10X budget");
  u64 n_lo = 1;
  if (h < 0) n_lo = ha + 1;  // need n + h >= 1
  if (n_lo > X) return 0.0;

  const u64 chunk = u64(1) << 20;
  u64 tasks = (X - n_lo) / chunk + 1;
  std::vector<double> partial(tasks, 0.0);
  parallel_for(tasks, threads, [&](u64 t) {
    u64 lo = n_lo + t * chunk;
    u64 hi = std::min<u64>(X + 1, lo + chunk);
    arith_segment a = build_segment(lo, hi);
    arith_segment b = build_segment(static_cast<u64>(static_cast<i64>(lo) + h),
                                    static_cast<u64>(static_cast<i64>(hi) + h));
    kahan acc;
    for (u64 n = lo; n < hi; ++n) {
      double va = a.vm_at(n);
      if (va == 0.0) continue;
      double vb = b.vm[n - lo];
      if (vb == 0.0) continue;
      acc.add(va * vb);
    }
    partial[t] = acc.total();
  });
  kahan total;
  for (double p : partial) total.add(p);
  return total.total();
}

// sum_{n1 + n2 = h, n1, n2 >= 1} Lambda(n1) Lambda(n2), ordered pairs.
inline double goldbach_sum(u64 h, unsigned threads = 1) {
  if (h < 4) throw validation_error("goldbach_sum: need h >= 4");
  if (h > k_correlation_budget)
    throw budget_error("goldbach_sum: h <= 1e8 budget");
  const u64 chunk = u64(1) << 20;
  u64 tasks = (h - 2) / chunk + 1;
  std::vector<double> partial(tasks, 0.0);
  parallel_for(tasks, threads, [&](u64 t) {
    u64 lo = 1 + t * chunk;
    u64 hi = std::min<u64>(h, lo + chunk);
    if (lo >= hi) return;
    arith_segment a = build_segment(lo, hi);
    arith_segment b = build_segment(h - hi + 1, h - lo + 1);
    kahan acc;
    for (u64 n = lo; n < hi; ++n) {
      double va = a.vm_at(n);
      if (va == 0.0) continue;
      double vb = b.vm[h - n - b.lo];
      if (vb == 0.0) continue;
      acc.add(va * vb);
    }
    partial[t] = acc.total();
  });
  kahan total;
  for (double p : partial) total.add(p);
  return total.total();
}

struct corr_params {
  u64 X = 1000;
  i64 h = 2;
  const quad_char* chi = nullptr;
  double u = 4.0;

  double z() const { return std::pow(static_cast<double>(X), 1.0 / u); }
  double V() const {
    return chi ? std::log(static_cast<double>(X)) /
                     std::log(static_cast<double>(chi->q))
               : 0.0;
  }
};

// sum over n with (n (sign n + h), q P(z)) = 1 of g(n/X) lambda'(n)
// lambda'(sign n + h).
inline double rough_lambda_prime_correlation(const corr_params& params,
                                             const smooth_window& g, int sign) {
  if (params.chi == nullptr)
    throw validation_error("rough_lambda_prime_correlation: missing character");
  if (sign != 1 && sign != -1)
    throw validation_error("rough_lambda_prime_correlation: sign must be +-1");
  if (params.X > (u64(1) << 22))
    throw budget_error("rough_lambda_prime_correlation: X <= 2^22 budget");
  const quad_char& chi = *params.chi;
  double z = params.z();
  u64 X = params.X;
  u64 lo = X + 1, hi = 2 * X;  // open support of g(n/X)
  if (lo >= hi) return 0.0;
  std::vector<double> lp1 = lambda_prime_seq(chi, lo, hi);
  rough_mask r1 = make_rough_mask(lo, hi, z, 1);
  i64 t_lo = sign * static_cast<i64>(lo) + params.h;
  i64 t_hi = sign * static_cast<i64>(hi - 1) + params.h;
  if (t_lo > t_hi) std::swap(t_lo, t_hi);
  t_lo = std::max<i64>(t_lo, 1);
  if (t_lo > t_hi) return 0.0;  // shifted values never positive
  std::vector<double> lp2 = lambda_prime_seq(chi, static_cast<u64>(t_lo),
                                             static_cast<u64>(t_hi) + 1);
  rough_mask r2 = make_rough_mask(static_cast<u64>(t_lo),
                                  static_cast<u64>(t_hi) + 1, z, 1);
  kahan acc;
  for (u64 n = lo; n < hi; ++n) {
    double gv = g(static_cast<double>(n) / static_cast<double>(X));
    if (gv == 0.0) continue;
    if (!r1.at(n) || chi.principal(n) == 0) continue;
    double a = lp1[n - lo];
    if (a == 0.0) continue;
    i64 t = sign * static_cast<i64>(n) + params.h;
    if (t < t_lo || t > t_hi) continue;
    u64 tu = static_cast<u64>(t);
    if (!r2.at(tu) || chi.principal(tu) == 0) continue;
    double b = lp2[tu - static_cast<u64>(t_lo)];
    if (b == 0.0) continue;
    acc.add(gv * a * b);
  }
  return acc.total();
}

// Residual Lambda(n) - lambda'(n) + c_n^{(q)} for n coprime to q P(z);
// identically zero on the precondition set.
inline double decomposition_residual(const quad_char& chi, double z, u64 n) {
  if (n < 1) throw validation_error("decomposition_residual: need n >= 1");
  auto fac = factorize(n);
  if (std::gcd(n, chi.q) != 1)
    throw validation_error("decomposition_residual: need (n, q) = 1");
  for (auto [p, e] : fac)
    if (static_cast<double>(p) < z)
      throw validation_error("decomposition_residual: need (n, P(z)) = 1");
  if (n == 1) return 0.0;

  // divisors of n, with chi and log per divisor
  std::vector<u64> divs{1};
  for (auto [p, e] : fac) {
    std::size_t base = divs.size();
    u64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  double logn = std::log(static_cast<double>(n));
  double Lam = (fac.size() == 1) ? std::log(static_cast<double>(fac[0].first))
                                 : 0.0;
  kahan lamp;  // lambda'(n)
  for (u64 d : divs) {
    int cd = chi.chi(d);
    if (cd == 0) continue;
    lamp.add(static_cast<double>(cd) *
             (logn - std::log(static_cast<double>(d))));
  }
  auto lambda_of = [&](u64 m) {
    i64 s = 0;
    for (u64 d : divs)
      if (m % d == 0) s += chi.chi(d);
    return static_cast<double>(s);
  };
  kahan cn;  // prime-power parts k with cofactor m = n/k > 1
  for (auto [p, e] : fac) {
    double lp = std::log(static_cast<double>(p));
    u64 k = 1;
    for (int j = 1; j <= e; ++j) {
      k *= p;
      u64 m = n / k;
      if (m <= 1) continue;
      cn.add(lp * lambda_of(m));
    }
  }
  return Lam - lamp.total() + cn.total();
}

// sum_{n <= 4X, (n (sign n + h), P(z)) = 1} c_n tau(sign n + h)^2, with the
// diagnostic bound shape (h/phi(h)) (X/log X) (u^4 S_lambda + u^10 / z).
struct cncor_result {
  double value = 0.0;
  double bound = 0.0;
};

inline double exzero_sum(const quad_char& chi, double z, double Y);

inline cncor_result error_sum_cncor(const corr_params& params, int sign) {
  if (params.chi == nullptr)
    throw validation_error("error_sum_cncor: missing character");
  if (params.h == 0) throw validation_error("error_sum_cncor: need h != 0");
  if (params.X > (u64(1) << 22))
    throw budget_error("error_sum_cncor: X <= 2^22 budget");
  const quad_char& chi = *params.chi;
  double z = params.z();
  u64 X = params.X;
  u64 hi = 4 * X + 1;
  std::vector<double> c = c_seq(chi, z, 1, hi, false);
  rough_mask rn = make_rough_mask(1, hi, z, 1);
  kahan acc;
  for (u64 blo = 1; blo < hi; blo += (u64(1) << 20)) {
    u64 bhi = std::min(hi, blo + (u64(1) << 20));
    for (u64 n = blo; n < bhi; ++n) {
      double cn = c[n - 1];
      if (cn == 0.0) continue;
      if (!rn.at(n)) continue;
      i64 t = sign * static_cast<i64>(n) + params.h;
      if (t < 1) continue;
      u64 tu = static_cast<u64>(t);
      bool rough = true;
      u64 tau = 1;
      for (auto [p, e] : factorize(tu)) {
        if (static_cast<double>(p) < z) {
          rough = false;
          break;
        }
        tau *= static_cast<u64>(e + 1);
      }
      if (!rough) continue;
      acc.add(cn * static_cast<double>(tau) * static_cast<double>(tau));
    }
  }
  cncor_result out;
  out.value = acc.total();
  double u = params.u;
  u64 ha = static_cast<u64>(params.h < 0 ? -params.h : params.h);
  double h_over_phi = multiplicative_eval(mult_fn::n_over_phi, ha);
  double s_lambda = exzero_sum(chi, z, 4.0 * static_cast<double>(X) / z);
  double logX = std::log(static_cast<double>(X));
  out.bound = h_over_phi * (static_cast<double>(X) / logX) *
              (std::pow(u, 4) * s_lambda + std::pow(u, 10) / z);
  return out;
}

// sum_{z <= m <= Y, (m, P(z)) = 1} lambda(m)/m.
inline double exzero_sum(const quad_char& chi, double z, double Y) {
  if (!(z > 1.0)) throw validation_error("exzero_sum: need z > 1");
  if (Y < z) return 0.0;
  u64 top = static_cast<u64>(std::floor(Y));
  if (top > k_correlation_budget / 2)
    throw budget_error("exzero_sum: Y <= 5e7 budget");
  if (top < 2) return 0.0;
  kahan acc;
  const u64 chunk = u64(1) << 22;
  for (u64 lo = 2; lo <= top; lo += chunk) {
    u64 hi = std::min(top + 1, lo + chunk);
    std::vector<i64> lam = lambda_seq(chi, lo, hi);
    rough_mask rm = make_rough_mask(lo, hi, z, 1);
    for (u64 m = lo; m < hi; ++m) {
      if (!rm.at(m)) continue;
      if (!(static_cast<double>(m) >= z)) continue;
      i64 lv = lam[m - lo];
      if (lv == 0) continue;
      acc.add(static_cast<double>(lv) / static_cast<double>(m));
    }
  }
  return acc.total();
}

// Diagnostic bound shape for the rough lambda/m sum, unit implied constant.
inline double exzero_bound(const quad_char& chi, double z, double Y, double eta) {
  double v = std::log(z) / std::log(static_cast<double>(chi.q));
  double ratio = std::log(Y) / std::log(z);
  double base = 1.0 / (v * v * std::pow(eta, v / 2.0)) + (v / eta) * ratio + 1.0 / z;
  return base * ratio * ratio;
}

struct ratio_triple {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// sum_{n <= N, (n,P(z))=1} chi(n) log(y/n)/n against the Mertens product
// prod_{p<z} (1-1/p)^{-1}.
inline ratio_triple chisums_ratio(const quad_char& chi, double z, u64 N, double y) {
  if (N < 1 || !(y >= 1.0))
    throw validation_error("chisums_ratio: need N, y >= 1");
  if (N > k_correlation_budget)
    throw budget_error("chisums_ratio: N <= 1e8 budget");
  double logy = std::log(y);
  kahan acc;
  const u64 chunk = u64(1) << 22;
  for (u64 lo = 1; lo <= N; lo += chunk) {
    u64 hi = std::min(N + 1, lo + chunk);
    rough_mask rm = make_rough_mask(lo, hi, z, 1);
    for (u64 n = lo; n < hi; ++n) {
      if (!rm.at(n)) continue;
      int cv = chi.chi(n);
      if (cv == 0) continue;
      acc.add(static_cast<double>(cv) * (logy - std::log(static_cast<double>(n))) /
              static_cast<double>(n));
    }
  }
  ratio_triple out;
  out.lhs = acc.total();
  double rhs = 1.0;
  auto primes = base_primes(static_cast<u64>(std::ceil(z)));
  for (u32 p : *primes) {
    if (!(static_cast<double>(p) < z)) break;
    rhs /= 1.0 - 1.0 / static_cast<double>(p);
  }
  out.rhs = rhs;
  out.ratio = out.lhs / rhs;
  return out;
}

}  // namespace primecorr
