// verify.hpp
//
// The verify-all engine: every closed-form identity and dual-route check in
// the library is exercised over deterministic grids and summarized as one
// row per identity (instances, passes, failures, max relative error).  All
// asymptotic "<<" bounds stay out of here; they are diagnostics, not
// identities.

#pragma once

#include <string>
#include <vector>

#include "primecorr/characters.hpp"
#include "primecorr/common.hpp"
#include "primecorr/correlations.hpp"
#include "primecorr/divisor_correlation.hpp"
#include "primecorr/expsums.hpp"
#include "primecorr/report.hpp"
#include "primecorr/sieve.hpp"
#include "primecorr/singular.hpp"
#include "primecorr/smooth.hpp"

namespace primecorr {

struct verify_row {
  std::string lemma_id;
  u64 instances = 0;
  u64 passes = 0;
  u64 failures = 0;
  double max_rel_err = 0.0;

  void tally(bool ok, double rel = 0.0) {
    ++instances;
    if (ok)
      ++passes;
    else
      ++failures;
    if (rel > max_rel_err) max_rel_err = rel;
  }
};

struct verify_summary {
  std::string budget;
  u64 seed = 0;
  unsigned threads = 1;
  std::vector<verify_row> rows;

  bool all_pass() const {
    for (const auto& r : rows)
      if (r.failures) return false;
    return true;
  }
};

namespace detail {

inline std::vector<i64> fundamental_list(i64 bound) {
  std::vector<i64> out;
  for (i64 a = 3; a <= bound; ++a) {
    if (is_fundamental(a)) out.push_back(a);
    if (is_fundamental(-a)) out.push_back(-a);
  }
  return out;
}

inline verify_row verify_charsums(i64 dmax) {
  verify_row row;
  row.lemma_id = "charsum_closed_forms";
  for (i64 d : fundamental_list(dmax)) {
    quad_char chi = make_character(d);
    for (int sign : {+1, -1}) {
      for (i64 h = 1; h <= 2 * static_cast<i64>(chi.q); ++h) {
        for (auto mode : {char_sum_mode::principal_principal,
                          char_sum_mode::chi_principal, char_sum_mode::chi_chi}) {
          char_sum_spec spec{&chi, mode, h, sign};
          rat a = complete_char_sum(spec);
          rat b = complete_char_sum_bruteforce(spec);
          row.tally(a == b, a == b ? 0.0 : 1.0);
        }
      }
    }
  }
  return row;
}

inline verify_row verify_weil(i64 pmax, int pairs, splitmix64& rng) {
  verify_row row;
  row.lemma_id = "weil_bound";
  auto primes = base_primes(static_cast<u64>(pmax));
  for (u32 p : *primes) {
    if (p > pmax) break;
    double bound = 2.0 * std::sqrt(static_cast<double>(p));
    for (int i = 0; i < pairs; ++i) {
      i64 a = 1 + static_cast<i64>(rng.below(p - 1 ? p - 1 : 1));
      i64 b = 1 + static_cast<i64>(rng.below(p - 1 ? p - 1 : 1));
      double s = kloosterman_real(a, b, p);
      double rel = std::abs(s) / bound;
      row.tally(std::abs(s) <= bound * (1.0 + 1e-12), rel);
    }
  }
  return row;
}

inline verify_row verify_kloosterman_mult(u64 cmax, int samples, splitmix64& rng) {
  verify_row row;
  row.lemma_id = "kloosterman_twisted_mult";
  int done = 0;
  while (done < samples) {
    u64 c1 = 2 + rng.below(110);
    u64 c2 = 2 + rng.below(110);
    if (std::gcd(c1, c2) != 1 || c1 * c2 > cmax) continue;
    i64 a = 1 + static_cast<i64>(rng.below(c1 * c2));
    i64 b = 1 + static_cast<i64>(rng.below(c1 * c2));
    i64 c2_inv = mod_inverse(static_cast<i64>(c2 % c1), static_cast<i64>(c1));
    i64 c1_inv = mod_inverse(static_cast<i64>(c1 % c2), static_cast<i64>(c2));
    double lhs = kloosterman_real(a, b, c1 * c2);
    double r1 = kloosterman_real(a * c2_inv, b * c2_inv, c1);
    double r2 = kloosterman_real(a * c1_inv, b * c1_inv, c2);
    double rhs = r1 * r2;
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    double rel = std::abs(lhs - rhs) / scale;
    row.tally(rel <= 1e-6, rel);
    ++done;
  }
  return row;
}

inline verify_row verify_ramanujan(u64 cmax) {
  verify_row row;
  row.lemma_id = "ramanujan_dual_route";
  for (u64 c = 1; c <= cmax; ++c) {
    for (i64 b : {i64(1), i64(2), static_cast<i64>(c / 2 + 1), static_cast<i64>(c)}) {
      double direct = kloosterman_real(0, b, c);
      double closed = ramanujan(b, c);  // throws if routes disagree
      double rel = std::abs(direct - closed) / std::max(1.0, std::abs(closed));
      row.tally(rel <= 1e-8, rel);
    }
  }
  return row;
}

// Poisson identity with a Gaussian test function f(x) = exp(-pi (x/s)^2),
// whose transform is s exp(-pi s^2 xi^2).
inline verify_row verify_poisson(int dmax, int qmax) {
  verify_row row;
  row.lemma_id = "poisson_gaussian";
  const double s = 25.0;
  auto f = [&](double x) { return std::exp(-M_PI * (x / s) * (x / s)); };
  auto fhat = [&](double xi) { return s * std::exp(-M_PI * s * s * xi * xi); };
  for (int d = 1; d <= dmax; d += 7) {
    for (int q = 1; q <= qmax; q += 9) {
      i64 b = 1;
      if (std::gcd(static_cast<i64>(d), b * q) != 1) continue;
      // lhs: sum over m = b (mod d) of f(m) e_q(m)
      double re = 0.0, im = 0.0;
      i64 span = static_cast<i64>(8.0 * s);
      for (i64 m = b - ((b + span) / d) * d; m <= span; m += d) {
        double fv = f(static_cast<double>(m));
        double ang = 2.0 * M_PI * static_cast<double>(((m % q) + q) % q) / q;
        re += fv * std::cos(ang);
        im += fv * std::sin(ang);
      }
      // rhs: (1/(dq)) sum_h fhat(h/(dq)) sum_{m mod dq, m = b (d)} e_q(m) e_dq(hm)
      double rre = 0.0, rim = 0.0;
      i64 dq = static_cast<i64>(d) * q;
      i64 hspan = static_cast<i64>(std::ceil(8.0 * dq / (M_PI * s))) + 2;
      for (i64 h = -hspan; h <= hspan; ++h) {
        double fh = fhat(static_cast<double>(h) / static_cast<double>(dq));
        if (fh < 1e-18) continue;
        double cre = 0.0, cim = 0.0;
        for (i64 m = ((b % d) + d) % d; m < dq; m += d) {
          i64 hm = (((h % dq) * m) % dq + dq) % dq;
          double ang = 2.0 * M_PI * (static_cast<double>(m % q) / q +
                                     static_cast<double>(hm) / dq);
          cre += std::cos(ang);
          cim += std::sin(ang);
        }
        rre += fh * cre;
        rim += fh * cim;
      }
      rre /= static_cast<double>(dq);
      rim /= static_cast<double>(dq);
      double err = std::hypot(re - rre, im - rim);
      row.tally(err <= 1e-8, err);
    }
  }
  return row;
}

inline verify_row verify_gcd_sums(splitmix64& rng, int samples) {
  verify_row row;
  row.lemma_id = "gcd_sum_bounds";
  for (int i = 0; i < samples; ++i) {
    u64 L = 1 + rng.below(3000);
    i64 q = 1 + static_cast<i64>(rng.below(10000));
    auto un = gcd_sum(L, q, false);
    auto we = gcd_sum(L, q, true);
    bool ok = un.sum <= un.bound * (1 + 1e-12) && we.sum <= we.bound * (1 + 1e-12);
    double rel = std::max(un.sum / un.bound, we.sum / we.bound);
    row.tally(ok, rel);
  }
  return row;
}

inline verify_row verify_buchstab(u64 nmax) {
  verify_row row;
  row.lemma_id = "sieve_buchstab";
  struct grid_point {
    double z;
    int beta;
    int s;
  };
  for (grid_point gp : {grid_point{10, 2, 3}, grid_point{30, 2, 3},
                        grid_point{30, 10, 3}, grid_point{30, 5, 5}}) {
    sieve_weights w =
        generate_weights(gp.z, std::pow(gp.z, gp.s), gp.beta, 2);
    for (u64 n = 1; n <= nmax; n += 3) {
      i64 lhs = sieve_sum_at(n, w, 1);
      bool rough = true;
      for (auto [p, e] : factorize(n))
        if (static_cast<double>(p) < gp.z) {
          rough = false;
          break;
        }
      auto st = broken_chains_at(n, w, 1);
      bool ok = (lhs - (rough ? 1 : 0) == st.total) && lhs >= (rough ? 1 : 0) &&
                st.ladder_ok;
      row.tally(ok, ok ? 0.0 : 1.0);
    }
  }
  return row;
}

inline verify_row verify_fundamental() {
  verify_row row;
  row.lemma_id = "fundamental_lemma_regression";
  {
    sieve_weights w = generate_weights(3.0, 9.0, 2, 2);
    auto r = fundamental_sum(w, [](u32 p) { return 1.0 / p; });
    row.tally(r.lhs == 0.5 && r.rhs == 0.5, std::abs(r.lhs - 0.5));
    auto z = fundamental_sum(w, [](u32) { return 0.0; });
    row.tally(z.lhs == 1.0 && z.rhs == 1.0, std::abs(z.lhs - 1.0));
  }
  // frozen enumeration values at z = 50, beta = 10
  const double expected_lhs[4] = {0.5, 0.26666666666666666, 0.18061938061938063,
                                  0.15287113498838556};
  const int svals[4] = {3, 5, 8, 10};
  for (int i = 0; i < 4; ++i) {
    sieve_weights w = generate_weights(50.0, std::pow(50.0, svals[i]), 10, 2);
    auto r = fundamental_sum(w, [](u32 p) { return 1.0 / p; });
    double rel = std::abs(r.lhs - expected_lhs[i]) / expected_lhs[i];
    row.tally(rel <= 1e-9, rel);
  }
  return row;
}

inline verify_row verify_convolution(u64 nmax) {
  verify_row row;
  row.lemma_id = "convolution_lambda";
  for (i64 d : {i64(-3), i64(-4), i64(5), i64(12)}) {
    quad_char chi = make_character(d);
    std::vector<double> lp = lambda_prime_seq(chi, 1, nmax + 1);
    std::vector<i64> lam = lambda_seq(chi, 1, nmax + 1);
    // lambda * Lambda via prime powers
    std::vector<double> conv(nmax, 0.0);
    auto primes = base_primes(nmax);
    for (u32 p : *primes) {
      if (p > nmax) break;
      double lg = std::log(static_cast<double>(p));
      for (u64 k = p; k <= nmax; k *= p) {
        for (u64 m = 1; k * m <= nmax; ++m)
          conv[k * m - 1] += lg * static_cast<double>(lam[m - 1]);
        if (k > nmax / p) break;
      }
    }
    u64 bad = 0;
    double worst = 0.0;
    for (u64 n = 1; n <= nmax; ++n) {
      double a = lp[n - 1], b = conv[n - 1];
      double rel = std::abs(a - b) / std::max(1.0, std::abs(a));
      if (rel > worst) worst = rel;
      if (rel > 1e-9) ++bad;
      if (a < -1e-12 || static_cast<double>(lam[n - 1]) < 0) ++bad;
    }
    row.instances += nmax;
    row.passes += nmax - bad;
    row.failures += bad;
    if (worst > row.max_rel_err) row.max_rel_err = worst;
  }
  return row;
}

inline verify_row verify_decomposition(u64 nmax) {
  verify_row row;
  row.lemma_id = "rough_decomposition";
  const double z = 20.0;
  for (i64 d : {i64(5), i64(12)}) {
    quad_char chi = make_character(d);
    std::vector<double> lp = lambda_prime_seq(chi, 1, nmax + 1);
    std::vector<double> cq = c_seq(chi, z, 1, nmax + 1, true);
    rough_mask rm = make_rough_mask(1, nmax + 1, z, 1);
    arith_segment seg = build_segment(1, nmax + 1);
    for (u64 n = 1; n <= nmax; ++n) {
      if (!rm.at(n) || chi.principal(n) == 0) continue;
      double resid = seg.vm_at(n) - lp[n - 1] + cq[n - 1];
      double scale = std::max(1.0, lp[n - 1]);
      double rel = std::abs(resid) / scale;
      row.tally(rel <= 1e-9, rel);
    }
  }
  return row;
}

inline verify_row verify_correction_flip(i64 dmax) {
  verify_row row;
  row.lemma_id = "correction_flip";
  for (i64 d : fundamental_list(dmax)) {
    quad_char chi = make_character(d);
    for (i64 h = 2; h <= 2 * static_cast<i64>(chi.q); h += 2) {
      double kt = correction_factor(h, chi, pair_kind::twin).kappa;
      double kg = correction_factor(h, chi, pair_kind::goldbach).kappa;
      double expect = 1.0 + chi.parity * (kt - 1.0);
      double rel = std::abs(kg - expect);
      row.tally(rel <= 1e-12, rel);
      if (chi.parity == 1) row.tally(kt == kg, std::abs(kt - kg));
    }
  }
  return row;
}

inline verify_row verify_avg_singular(const std::vector<u64>& hs) {
  verify_row row;
  row.lemma_id = "singular_series_average";
  for (u64 H : hs) {
    double a = avg_singular_series_direct(H);
    double b = avg_singular_series_rearranged(H);
    double rel = std::abs(a - b) / std::max(1.0, std::abs(a));
    row.tally(rel <= 1e-9, rel);
    double h2 = static_cast<double>(H) * static_cast<double>(H);
    double band = 10.0 * std::log(static_cast<double>(H)) / static_cast<double>(H);
    double dev = std::abs(a / h2 - 1.0);
    row.tally(dev <= band, dev / band);
  }
  return row;
}

inline verify_row verify_smooth_certificates() {
  verify_row row;
  row.lemma_id = "smooth_window_certificates";
  for (double delta : {0.05, 0.1, 0.2}) {
    smooth_window g = make_smooth_window(delta);
    // dense finite differences on the left ramp
    double step = delta / 400.0;
    double sup1 = 0.0, sup2 = 0.0;
    for (int i = 1; i < 400; ++i) {
      double x = 1.0 + i * step;
      double d1 = (g(x + step) - g(x - step)) / (2 * step);
      double d2 = (g(x + step) - 2 * g(x) + g(x - step)) / (step * step);
      sup1 = std::max(sup1, std::abs(d1));
      sup2 = std::max(sup2, std::abs(d2));
    }
    bool ok1 = sup1 <= g.deriv_bound_consts[1] / delta * (1 + 1e-6);
    bool ok2 = sup2 <= g.deriv_bound_consts[2] / (delta * delta) * (1 + 1e-6);
    bool okp = g(1.5) == 1.0 && g(0.9) == 0.0 && g(2.1) == 0.0;
    row.tally(ok1 && ok2 && okp, 0.0);
  }
  return row;
}

}  // namespace detail

inline verify_summary run_verify(const std::string& budget, u64 seed,
                                 unsigned threads) {
  bool full = budget == "full";
  if (!full && budget != "small")
    throw validation_error("verify-all: budget must be 'small' or 'full'");
  verify_summary out;
  out.budget = budget;
  out.seed = seed;
  out.threads = threads;
  splitmix64 rng(seed);

  out.rows.push_back(detail::verify_charsums(full ? 120 : 40));
  out.rows.push_back(detail::verify_weil(full ? 1000 : 300, full ? 25 : 10, rng));
  out.rows.push_back(detail::verify_kloosterman_mult(full ? 10000 : 2000,
                                                     full ? 60 : 25, rng));
  out.rows.push_back(detail::verify_ramanujan(full ? 300 : 120));
  out.rows.push_back(detail::verify_poisson(full ? 50 : 22, full ? 50 : 28));
  out.rows.push_back(detail::verify_gcd_sums(rng, full ? 60 : 25));
  out.rows.push_back(detail::verify_buchstab(full ? 10000 : 2000));
  out.rows.push_back(detail::verify_fundamental());
  out.rows.push_back(detail::verify_convolution(full ? 100000 : 20000));
  out.rows.push_back(detail::verify_decomposition(full ? 1000000 : 100000));
  out.rows.push_back(detail::verify_correction_flip(full ? 300 : 60));
  out.rows.push_back(detail::verify_avg_singular(
      full ? std::vector<u64>{1000, 10000} : std::vector<u64>{300, 1000}));
  out.rows.push_back(detail::verify_smooth_certificates());
  return out;
}

inline std::string verify_to_json(const verify_summary& s) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"budget\": \"" << s.budget << "\",\n";
  os << "  \"seed\": " << s.seed << ",\n";
  os << "  \"threads\": " << s.threads << ",\n";
  os << "  \"implied_constant\": 1,\n";
  os << "  \"all_pass\": " << (s.all_pass() ? "true" : "false") << ",\n";
  os << "  \"results\": [\n";
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& r = s.rows[i];
    os << "    {\"lemma_id\": \"" << r.lemma_id << "\", \"instances\": "
       << r.instances << ", \"passes\": " << r.passes
       << ", \"failures\": " << r.failures
       << ", \"max_rel_err\": " << fmt_sig(r.max_rel_err) << "}"
       << (i + 1 < s.rows.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace primecorr
