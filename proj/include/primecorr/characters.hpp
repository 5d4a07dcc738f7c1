// characters.hpp
//
// Real primitive Dirichlet characters realized through the Kronecker symbol,
// L(1,chi) with a certified truncation error, and the effective-eta surrogate
// 1/(L(1,chi) log q) used to rank how exceptional a character looks.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "primecorr/arith.hpp"
#include "primecorr/common.hpp"

namespace primecorr {

// Kronecker symbol (d|n), total in both arguments.
inline int kronecker(i64 d, i64 n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) sign = -sign;
  }
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (d % 2 == 0) return 0;
    if (twos % 2 == 1) {
      int dm8 = static_cast<int>(((d % 8) + 8) % 8);
      if (dm8 == 3 || dm8 == 5) sign = -sign;
    }
  }
  i64 a = d % n;
  if (a < 0) a += n;
  // Jacobi (a|n) with n odd positive
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 nm8 = n % 8;
      if (nm8 == 3 || nm8 == 5) sign = -sign;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) sign = -sign;
    a %= n;
  }
  return (n == 1) ? sign : 0;
}

// d = 1 (mod 4) squarefree, or 4m with m = 2,3 (mod 4) squarefree.
// Returns an empty string when fundamental, else the failed test.
inline std::string fundamental_failure(i64 d) {
  if (d == 0) return "d = 0";
  auto squarefree = [](u64 n) {
    for (auto [p, e] : factorize(n))
      if (e >= 2) return false;
    return true;
  };
  i64 mod4 = ((d % 4) + 4) % 4;
  if (mod4 == 1) {
    if (!squarefree(static_cast<u64>(d < 0 ? -d : d)))
      return "d = 1 (mod 4) but not squarefree";
    return "";
  }
  if (mod4 != 0) return "d = " + std::to_string(mod4) + " (mod 4)";
  i64 m = d / 4;
  i64 m4 = ((m % 4) + 4) % 4;
  if (m4 != 2 && m4 != 3)
    return "d = 4m with m = " + std::to_string(m4) + " (mod 4), need 2 or 3";
  if (!squarefree(static_cast<u64>(m < 0 ? -m : m)))
    return "d = 4m with m not squarefree";
  return "";
}

inline bool is_fundamental(i64 d) {
  return d != 0 && d != 1 && fundamental_failure(d).empty();
}

// Real primitive character of fundamental discriminant d, modulus q = |d|.
struct quad_char {
  i64 disc = 0;
  u64 q = 1;
  int r = 0;      // 2-adic valuation of q, in {0, 2, 3}
  u64 q_odd = 1;  // odd part, squarefree
  int parity = 1; // chi(-1) = sign(d)
  std::vector<int8_t> tab;  // one period of values

  int chi(u64 n) const { return tab[n % q]; }
  int chi_int(i64 n) const {
    i64 m = n % static_cast<i64>(q);
    if (m < 0) m += static_cast<i64>(q);
    return tab[static_cast<u64>(m)];
  }
  int principal(u64 n) const { return std::gcd(n, q) == 1 ? 1 : 0; }
};

inline quad_char make_character(i64 d) {
  if (d == 0 || (d < 3 && d > -3))
    throw validation_error("make_character: need |d| >= 3, d nonzero");
  std::string fail = fundamental_failure(d);
  if (!fail.empty())
    throw validation_error("make_character: d = " + std::to_string(d) +
                           " is not a fundamental discriminant (" + fail + ")");
  quad_char c;
  c.disc = d;
  c.q = static_cast<u64>(d < 0 ? -d : d);
  c.q_odd = c.q;
  c.r = 0;
  while (c.q_odd % 2 == 0) {
    c.q_odd /= 2;
    ++c.r;
  }
  c.parity = d < 0 ? -1 : 1;
  if (c.q > (u64(1) << 26))
    throw budget_error("make_character: modulus above table budget 2^26");
  c.tab.resize(c.q);
  for (u64 n = 0; n < c.q; ++n)
    c.tab[n] = static_cast<int8_t>(kronecker(d, static_cast<i64>(n)));
  return c;
}

// L(1,chi) from a truncated character sum plus a certified tail bound.
struct lvalue {
  double value = 0.0;
  double err = 0.0;
  double eta = 0.0;  // 1/(value * log q)
};

// Partial sums of chi over any interval are bounded by q, so Abel summation
// bounds the tail beyond N0 by q/N0.  N0 = ceil(q / target_err).
inline lvalue l_one(const quad_char& chi, double target_err = 1e-8) {
  if (!(target_err > 0)) throw validation_error("l_one: need target_err > 0");
  // slight overshoot keeps tail + rounding slack within the target
  double need = 1.02 * static_cast<double>(chi.q) / target_err;
  constexpr double budget = 2147483648.0;  // 2^31 terms
  if (need > budget)
    throw budget_error("l_one: q/target_err = " + std::to_string(need) +
                       " terms exceeds truncation budget 2^31");
  u64 n0 = std::max<u64>(1000, static_cast<u64>(std::ceil(need)));
  kahan acc;
  for (u64 n = 1; n <= n0; ++n) {
    int v = chi.tab[n % chi.q];
    if (v) acc.add(static_cast<double>(v) / static_cast<double>(n));
  }
  lvalue out;
  out.value = acc.total();
  out.err = static_cast<double>(chi.q) / static_cast<double>(n0) + 1e-12;
  if (!(out.value - out.err > 0))
    throw numeric_error("l_one: certified interval not positive");
  out.eta = 1.0 / (out.value * std::log(static_cast<double>(chi.q)));
  return out;
}

struct eta_interval {
  double eta = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

inline eta_interval effective_eta(const quad_char& chi, double target_err = 1e-8) {
  lvalue L = l_one(chi, target_err);
  double logq = std::log(static_cast<double>(chi.q));
  eta_interval e;
  e.eta = 1.0 / (L.value * logq);
  e.lo = 1.0 / ((L.value + L.err) * logq);
  e.hi = 1.0 / ((L.value - L.err) * logq);
  return e;
}

// Fundamental discriminants in [d_lo, d_hi] ranked by descending effective
// eta; ties broken by |d| ascending, then d ascending.
inline std::vector<std::pair<i64, double>> most_exceptional(
    i64 d_lo, i64 d_hi, double target_err = 1e-4) {
  std::vector<std::pair<i64, double>> out;
  for (i64 d = d_lo; d <= d_hi; ++d) {
    if (!is_fundamental(d) || (d > -3 && d < 3)) continue;
    quad_char chi = make_character(d);
    out.emplace_back(d, effective_eta(chi, target_err).eta);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    i64 aa = a.first < 0 ? -a.first : a.first;
    i64 ab = b.first < 0 ? -b.first : b.first;
    if (aa != ab) return aa < ab;
    return a.first < b.first;
  });
  return out;
}

inline std::vector<std::pair<i64, double>> most_exceptional(
    const std::vector<i64>& ds, double target_err = 1e-4) {
  std::vector<std::pair<i64, double>> out;
  for (i64 d : ds) {
    if (!is_fundamental(d) || (d > -3 && d < 3)) continue;
    quad_char chi = make_character(d);
    out.emplace_back(d, effective_eta(chi, target_err).eta);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    i64 aa = a.first < 0 ? -a.first : a.first;
    i64 ab = b.first < 0 ? -b.first : b.first;
    if (aa != ab) return aa < ab;
    return a.first < b.first;
  });
  return out;
}

}  // namespace primecorr
