// divisor_correlation.hpp
//
// Generalized divisor correlations over rough numbers: the four-variable sum
// over sign*m1*n1 + h = m2*n2 weighted by real characters and a product
// plateau window, and its predicted main term (local products, a complete
// character sum, a rough double sum, and a window integral).  At desk scale
// the empirical sum collects its nonzero terms, sorts them, and adds them in
// canonical order, so an oracle enumerating the same tuples reproduces the
// value bit for bit.

#pragma once

#include <algorithm>
#include <vector>

#include "primecorr/correlations.hpp"

namespace primecorr {

struct divisor_windows {
  double M1 = 8, M2 = 8, N1 = 16, N2 = 16;
  smooth_window g;
};

// X is identified with M1*N1; M2*N2 must land in [X/4, 4X/delta].
inline divisor_windows make_divisor_windows(double M1, double M2, double N1,
                                            double N2, double delta) {
  if (!(M1 >= 1 && M2 >= 1 && N1 >= 1 && N2 >= 1))
    throw validation_error("divisor_windows: need M_j, N_j >= 1");
  if (!(M1 <= N1 && M2 <= N2))
    throw validation_error("divisor_windows: need M_j <= N_j");
  double X = M1 * N1;
  double P2 = M2 * N2;
  if (!(P2 >= X / 4.0 && P2 <= 4.0 * X / delta))
    throw validation_error(
        "divisor_windows: need M2*N2 within [X/4, 4X/delta] of X = M1*N1");
  divisor_windows w;
  w.M1 = M1;
  w.M2 = M2;
  w.N1 = N1;
  w.N2 = N2;
  w.g = make_smooth_window(delta);
  return w;
}

struct char_modes {
  bool chi1 = true, chi2 = true;  // true: quadratic chi, false: principal
  bool psi1 = false, psi2 = false;
};

namespace detail {

struct window_range {
  u64 lo, hi;  // inclusive
  std::vector<double> gval;   // window factor per value
  std::vector<int8_t> cval;   // character value per value
  double at_g(u64 v) const { return gval[v - lo]; }
  int at_c(u64 v) const { return cval[v - lo]; }
};

inline window_range build_range(double M, const smooth_window& g, double z,
                                const quad_char& chi, bool use_chi) {
  window_range r;
  r.lo = static_cast<u64>(std::ceil(M));
  r.hi = static_cast<u64>(std::floor(2.0 * M));
  if (r.lo < 1) r.lo = 1;
  if (r.hi < r.lo) r.hi = r.lo;
  rough_mask rm = make_rough_mask(r.lo, r.hi + 1, std::max(z, 1.0 + 1e-9), 1);
  r.gval.resize(r.hi - r.lo + 1);
  r.cval.resize(r.hi - r.lo + 1);
  for (u64 v = r.lo; v <= r.hi; ++v) {
    double gv = rm.at(v) ? g(static_cast<double>(v) / M) : 0.0;
    r.gval[v - r.lo] = gv;
    int cv = use_chi ? chi.chi(v) : chi.principal(v);
    r.cval[v - r.lo] = static_cast<int8_t>(cv);
  }
  return r;
}

}  // namespace detail

// Empirical four-variable correlation.  Tuple visits are counted against the
// budget; instances with at most 1e7 nonzero terms are summed in sorted
// order, larger ones stream through a compensated accumulator.
inline double divisor_correlation(const divisor_windows& win, i64 h, int sign,
                                  const char_modes& modes, double z,
                                  const quad_char& chi,
                                  u64 tuple_budget = 1'000'000'000) {
  if (sign != 1 && sign != -1)
    throw validation_error("divisor_correlation: sign must be +-1");
  if (h == 0) throw validation_error("divisor_correlation: need h != 0");
  auto r_m1 = detail::build_range(win.M1, win.g, z, chi, modes.chi1);
  auto r_m2 = detail::build_range(win.M2, win.g, z, chi, modes.chi2);
  auto r_n1 = detail::build_range(win.N1, win.g, z, chi, modes.psi1);
  auto r_n2 = detail::build_range(win.N2, win.g, z, chi, modes.psi2);

  // CSR of admissible (m2, n2) products over the t-window
  u64 t_lo = r_m2.lo * r_n2.lo;
  u64 t_hi = r_m2.hi * r_n2.hi;
  if (t_hi - t_lo > 30'000'000ULL)
    throw budget_error("divisor_correlation: t-window exceeds memory budget");
  std::vector<u32> bucket_count(t_hi - t_lo + 2, 0);
  u64 tuples = 0;
  for (u64 m2 = r_m2.lo; m2 <= r_m2.hi; ++m2) {
    if (r_m2.at_g(m2) == 0.0) continue;
    for (u64 n2 = r_n2.lo; n2 <= r_n2.hi; ++n2) {
      if (r_n2.at_g(n2) == 0.0) continue;
      ++bucket_count[m2 * n2 - t_lo];
      if (++tuples > tuple_budget)
        throw budget_error("divisor_correlation: tuple budget exceeded");
    }
  }
  std::vector<u32> offset(bucket_count.size() + 1, 0);
  for (std::size_t i = 0; i < bucket_count.size(); ++i)
    offset[i + 1] = offset[i] + bucket_count[i];
  std::vector<u32> m2_of(offset.back());
  {
    std::vector<u32> cursor(offset.begin(), offset.end() - 1);
    for (u64 m2 = r_m2.lo; m2 <= r_m2.hi; ++m2) {
      if (r_m2.at_g(m2) == 0.0) continue;
      for (u64 n2 = r_n2.lo; n2 <= r_n2.hi; ++n2) {
        if (r_n2.at_g(n2) == 0.0) continue;
        m2_of[cursor[m2 * n2 - t_lo]++] = static_cast<u32>(m2);
      }
    }
  }

  const u64 sort_cap = 10'000'000;
  std::vector<double> terms;
  kahan stream;
  bool sorting = true;
  auto emit = [&](double t) {
    if (sorting && terms.size() < sort_cap) {
      terms.push_back(t);
    } else if (sorting) {
      for (double x : terms) stream.add(x);
      terms.clear();
      terms.shrink_to_fit();
      sorting = false;
      stream.add(t);
    } else {
      stream.add(t);
    }
  };

  for (u64 m1 = r_m1.lo; m1 <= r_m1.hi; ++m1) {
    double g1 = r_m1.at_g(m1);
    if (g1 == 0.0) continue;
    int c1 = r_m1.at_c(m1);
    if (c1 == 0) continue;
    for (u64 n1 = r_n1.lo; n1 <= r_n1.hi; ++n1) {
      double g3 = r_n1.at_g(n1);
      if (g3 == 0.0) continue;
      int c3 = r_n1.at_c(n1);
      if (c3 == 0) continue;
      i64 t = sign * static_cast<i64>(m1 * n1) + h;
      if (t < static_cast<i64>(t_lo) || t > static_cast<i64>(t_hi)) continue;
      u64 tu = static_cast<u64>(t) - t_lo;
      for (u64 idx = offset[tu]; idx < offset[tu + 1]; ++idx) {
        if (++tuples > tuple_budget)
          throw budget_error("divisor_correlation: tuple budget exceeded");
        u64 m2 = m2_of[idx];
        u64 n2 = static_cast<u64>(t) / m2;
        int c2 = r_m2.at_c(m2);
        if (c2 == 0) continue;
        int c4 = r_n2.at_c(n2);
        if (c4 == 0) continue;
        double g2 = r_m2.at_g(m2);
        double g4 = r_n2.at_g(n2);
        double term = static_cast<double>(c1 * c2 * c3 * c4) * (g1 * g2 * g3 * g4);
        if (term != 0.0) emit(term);
      }
    }
  }
  if (sorting) {
    std::sort(terms.begin(), terms.end());
    kahan acc;
    for (double t : terms) acc.add(t);
    return acc.total();
  }
  return stream.total();
}

// Predicted main term: local factors at primes below z, the complete
// character sum in the psi pair, and the rough (m1, m2) double sum with the
// window integral evaluated by adaptive quadrature.
inline double divisor_correlation_main(const divisor_windows& win, i64 h,
                                       int sign, const char_modes& modes,
                                       double z, const quad_char& chi) {
  if (sign != 1 && sign != -1)
    throw validation_error("divisor_correlation_main: sign must be +-1");
  if (h == 0) throw validation_error("divisor_correlation_main: need h != 0");
  u64 q = chi.q;
  u64 ha = static_cast<u64>(h < 0 ? -h : h);

  double local = 1.0;
  auto primes = base_primes(static_cast<u64>(std::ceil(std::max(z, 2.0))));
  for (u32 p : *primes) {
    if (!(static_cast<double>(p) < z)) break;
    if (ha % p == 0 && q % p != 0)
      local *= 1.0 - 1.0 / static_cast<double>(p);
    else if (ha % p != 0 && q % p != 0)
      local *= 1.0 - 2.0 / static_cast<double>(p);
  }

  // gamma sum: (1/q) sum_gamma psi1(gamma) psi2(sign gamma + h), exact
  i64 gamma_num = 0;
  for (u64 gm = 0; gm < q; ++gm) {
    int a = modes.psi1 ? chi.chi(gm) : chi.principal(gm);
    if (a == 0) continue;
    i64 t = sign * static_cast<i64>(gm) + h;
    t %= static_cast<i64>(q);
    if (t < 0) t += static_cast<i64>(q);
    int b = modes.psi2 ? chi.chi(static_cast<u64>(t))
                       : chi.principal(static_cast<u64>(t));
    gamma_num += static_cast<i64>(a) * b;
  }
  double gamma_sum = static_cast<double>(gamma_num) / static_cast<double>(q);

  auto r_m1 = detail::build_range(win.M1, win.g, z, chi, modes.chi1);
  auto r_m2 = detail::build_range(win.M2, win.g, z, chi, modes.chi2);
  // psi values at m1/m2 as well
  kahan acc;
  for (u64 m1 = r_m1.lo; m1 <= r_m1.hi; ++m1) {
    double g1 = r_m1.at_g(m1);
    if (g1 == 0.0) continue;
    int c1 = r_m1.at_c(m1);
    int p1 = modes.psi1 ? chi.chi(m1) : chi.principal(m1);
    if (c1 == 0 || p1 == 0) continue;
    for (u64 m2 = r_m2.lo; m2 <= r_m2.hi; ++m2) {
      double g2 = r_m2.at_g(m2);
      if (g2 == 0.0) continue;
      int c2 = r_m2.at_c(m2);
      int p2 = modes.psi2 ? chi.chi(m2) : chi.principal(m2);
      if (c2 == 0 || p2 == 0) continue;
      double a_lo = static_cast<double>(m1) * win.N1;
      double a_hi = 2.0 * a_lo;
      double b_lo, b_hi;
      if (sign > 0) {
        b_lo = static_cast<double>(m2) * win.N2 - static_cast<double>(h);
        b_hi = 2.0 * static_cast<double>(m2) * win.N2 - static_cast<double>(h);
      } else {
        b_lo = static_cast<double>(h) - 2.0 * static_cast<double>(m2) * win.N2;
        b_hi = static_cast<double>(h) - static_cast<double>(m2) * win.N2;
      }
      double lo = std::max(a_lo, b_lo), hi = std::min(a_hi, b_hi);
      if (hi <= lo) continue;
      double n1s = static_cast<double>(m1) * win.N1;
      double n2s = static_cast<double>(m2) * win.N2;
      double integral = adaptive_simpson(
          [&](double y) {
            return win.g(y / n1s) *
                   win.g((sign * y + static_cast<double>(h)) / n2s);
          },
          lo, hi, 1e-8, 40);
      double coeff = static_cast<double>(c1 * p1 * c2 * p2) /
                     (static_cast<double>(m1) * static_cast<double>(m2));
      acc.add(coeff * (g1 * g2) * integral);
    }
  }
  return local * gamma_sum * acc.total();
}

}  // namespace primecorr
