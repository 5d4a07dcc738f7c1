#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "primecorr/compare.hpp"
#include "primecorr/correlations.hpp"
#include "primecorr/divisor_correlation.hpp"
#include "primecorr/variance.hpp"

using namespace primecorr;

namespace {

double lambda_ref(const quad_char& chi, u64 n) {
  i64 s = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) s += chi.chi(d);
  return static_cast<double>(s);
}

double lambda_prime_ref(const quad_char& chi, u64 n) {
  double s = 0.0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0)
      s += chi.chi(d) * std::log(static_cast<double>(n) / d);
  return s;
}

double mangoldt_ref(u64 n) {
  if (n < 2) return 0.0;
  u64 m = n;
  u64 p0 = 0;
  for (u64 p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      p0 = p;
      while (m % p == 0) m /= p;
      break;
    }
  }
  if (p0 == 0) return std::log(static_cast<double>(n));  // prime
  return (m == 1) ? std::log(static_cast<double>(p0)) : 0.0;
}

bool rough_ref(u64 n, double z) {
  for (u64 p = 2; static_cast<double>(p) < z; ++p) {
    bool prime = true;
    for (u64 d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (prime && n % p == 0) return false;
  }
  return true;
}

double c_ref(const quad_char& chi, double z, u64 n, bool include_q) {
  double total = 0.0;
  for (u64 k = 1; k <= n; ++k) {
    if (n % k) continue;
    u64 m = n / k;
    if (!(static_cast<double>(m) >= z)) continue;
    if (!rough_ref(k, z) || !rough_ref(m, z)) continue;
    if (include_q && (std::gcd(k, chi.q) != 1 || std::gcd(m, chi.q) != 1))
      continue;
    double vk = mangoldt_ref(k);
    if (vk == 0.0) continue;
    total += vk * lambda_ref(chi, m);
  }
  return total;
}

}  // namespace

TEST_CASE("lambda and lambda-prime pointwise") {
  quad_char c5 = make_character(5);
  auto lam = lambda_seq(c5, 1, 40);
  CHECK(lam[6 - 1] == 0);  // 1 + chi(2) + chi(3) + chi(6) = 1 - 1 - 1 + 1
  CHECK(lam[1 - 1] == 1);
  auto lp = lambda_prime_seq(c5, 1, 40);
  CHECK(lp[12 - 1] == Catch::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(lp[1 - 1] == 0.0);

  for (u64 n = 1; n < 40; ++n) {
    CHECK(static_cast<double>(lam[n - 1]) == lambda_ref(c5, n));
    CHECK(lp[n - 1] == Catch::Approx(lambda_prime_ref(c5, n)).margin(1e-12));
  }
}

TEST_CASE("nonnegativity and domination up to 1e5") {
  for (i64 d : {i64(5), i64(-4)}) {
    quad_char chi = make_character(d);
    const u64 N = 100000;
    auto lam = lambda_seq(chi, 1, N + 1);
    auto lp = lambda_prime_seq(chi, 1, N + 1);
    arith_segment seg = build_segment(1, N + 1);
    for (u64 n = 1; n <= N; ++n) {
      CAPTURE(d, n);
      REQUIRE(lam[n - 1] >= 0);
      REQUIRE(lp[n - 1] >= -1e-10);
      REQUIRE(seg.vm_at(n) <= lp[n - 1] + 1e-9);
    }
  }
}

TEST_CASE("windowed lambda matches the full-range computation") {
  quad_char c12 = make_character(12);
  auto full = lambda_seq(c12, 1, 3000);
  auto win = lambda_seq(c12, 1700, 2400);
  for (u64 n = 1700; n < 2400; ++n)
    REQUIRE(win[n - 1700] == full[n - 1]);
}

TEST_CASE("c_n: structure and brute-force agreement") {
  quad_char c5 = make_character(5);

  SECTION("z beyond the window kills everything") {
    auto c = c_seq(c5, 500.0, 1, 400, false);
    for (double v : c) REQUIRE(v == 0.0);
  }

  SECTION("primes contribute nothing") {
    auto c = c_seq(c5, 7.0, 1, 2000, false);
    for (u64 n : {u64(11), u64(13), u64(97), u64(1997)})
      REQUIRE(c[n - 1] == 0.0);
  }

  SECTION("brute-force double loop over decompositions") {
    for (bool include_q : {false, true}) {
      auto c = c_seq(c5, 7.0, 1, 2000, include_q);
      for (u64 n = 1; n < 2000; ++n) {
        double ref = c_ref(c5, 7.0, n, include_q);
        if (std::abs(c[n - 1] - ref) > 1e-9 * std::max(1.0, ref)) {
          CAPTURE(n, include_q);
          REQUIRE(c[n - 1] == Catch::Approx(ref).margin(1e-9));
        }
      }
    }
  }

  SECTION("windowed evaluation agrees with full range") {
    auto full = c_seq(c5, 7.0, 1, 4000, false);
    auto win = c_seq(c5, 7.0, 2500, 3500, false);
    for (u64 n = 2500; n < 3500; ++n)
      REQUIRE(win[n - 2500] == Catch::Approx(full[n - 1]).margin(1e-12));
  }
}

TEST_CASE("decomposition residual vanishes on the precondition set") {
  quad_char c5 = make_character(5);
  CHECK(decomposition_residual(c5, 10.0, 1) == 0.0);
  CHECK(decomposition_residual(c5, 10.0, 13) ==
        Catch::Approx(0.0).margin(1e-9));
  splitmix64 rng(99);
  int checked = 0;
  while (checked < 200) {
    u64 n = 2 + rng.below(1000000);
    if (!rough_ref(n, 30.0) || std::gcd(n, c5.q) != 1) continue;
    double r = decomposition_residual(c5, 30.0, n);
    CAPTURE(n);
    REQUIRE(std::abs(r) <= 1e-9 * std::max(1.0, std::log(static_cast<double>(n)) * 4));
    ++checked;
  }
  CHECK_THROWS_AS(decomposition_residual(c5, 30.0, 10), validation_error);
  CHECK_THROWS_AS(decomposition_residual(c5, 30.0, 4), validation_error);
}

TEST_CASE("twin correlations at small X") {
  double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0);
  CHECK(twin_correlation(4, 2) == Catch::Approx(l2 * l2 + l3 * l5).epsilon(1e-12));
  // n = 2, 3, 4 contribute: log2 log3 + log3 log2 + log2 log5
  CHECK(twin_correlation(6, 1) ==
        Catch::Approx(2.0 * l2 * l3 + l2 * l5).epsilon(1e-12));
  CHECK(twin_correlation(6, 1) == Catch::Approx(2.6385773721276).epsilon(1e-12));
  CHECK(twin_correlation(100, -2) ==
        Catch::Approx(twin_correlation(98, 2)).epsilon(1e-12));
  CHECK(predicted_main(pair_kind::twin, 1000.0, 7) == 0.0);
  CHECK_THROWS_AS(twin_correlation(1000, 0), validation_error);
  CHECK_THROWS_AS(twin_correlation(u64(2e8), 2), budget_error);
}

TEST_CASE("threaded twin correlation is bit-stable") {
  double a = twin_correlation(3000000 / 2, 6, 1);
  double b = twin_correlation(3000000 / 2, 6, 2);
  CHECK(a == b);
}

TEST_CASE("goldbach sums at small h") {
  double l2 = std::log(2.0), l3 = std::log(3.0);
  CHECK(goldbach_sum(4) == Catch::Approx(l2 * l2).epsilon(1e-12));
  CHECK(goldbach_sum(10) == Catch::Approx(7.826798026608958).epsilon(1e-12));
  CHECK(goldbach_sum(5) == Catch::Approx(2.0 * l2 * l3).epsilon(1e-12));
  CHECK(predicted_main(pair_kind::goldbach, 5.0, 5) == 0.0);
  CHECK_THROWS_AS(goldbach_sum(3), validation_error);
}

TEST_CASE("rough lambda-prime correlation") {
  quad_char c5 = make_character(5);

  SECTION("large z empties the support") {
    corr_params p{50, 2, &c5, 1.01};  // z = 50^{1/1.01} ~ 48, kills 2..100
    smooth_window g = make_smooth_window(0.1);
    // all n in (X, 2X) have a prime factor below z or fail; explicit brute
    double v = rough_lambda_prime_correlation(p, g, +1);
    double brute = 0.0;
    for (u64 n = 51; n < 100; ++n) {
      if (!rough_ref(n, p.z()) || !rough_ref(n + 2, p.z())) continue;
      if (std::gcd(n, c5.q) != 1 || std::gcd(n + 2, c5.q) != 1) continue;
      brute += g(n / 50.0) * lambda_prime_ref(c5, n) * lambda_prime_ref(c5, n + 2);
    }
    CHECK(v == Catch::Approx(brute).margin(1e-9));
  }

  SECTION("small case against brute force") {
    corr_params p{50, 2, &c5, 4.0};
    smooth_window g = make_smooth_window(0.1);
    double v = rough_lambda_prime_correlation(p, g, +1);
    double z = p.z();
    double brute = 0.0;
    for (u64 n = 51; n < 100; ++n) {
      if (!rough_ref(n, z) || !rough_ref(n + 2, z)) continue;
      if (std::gcd(n, c5.q) != 1 || std::gcd(n + 2, c5.q) != 1) continue;
      brute += g(n / 50.0) * lambda_prime_ref(c5, n) * lambda_prime_ref(c5, n + 2);
    }
    CHECK(v == Catch::Approx(brute).margin(1e-9));
  }

  SECTION("negative sign restricts to positive shifted values") {
    corr_params p{50, 30, &c5, 4.0};
    smooth_window g = make_smooth_window(0.1);
    double v = rough_lambda_prime_correlation(p, g, -1);
    // -n + 30 <= -21 < 0 on the support (51..99): everything vanishes
    CHECK(v == 0.0);
  }
}

TEST_CASE("c_n correlation error sum against brute force") {
  quad_char c5 = make_character(5);
  corr_params p{100, 2, &c5, 3.0};
  auto res = error_sum_cncor(p, +1);
  double z = p.z();
  double brute = 0.0;
  for (u64 n = 1; n <= 400; ++n) {
    if (!rough_ref(n, z) || !rough_ref(n + 2, z)) continue;
    double cn = c_ref(c5, z, n, false);
    if (cn == 0.0) continue;
    u64 m = n + 2, tau = 1;
    for (u64 q = 2; q * q <= m; ++q) {
      if (m % q) continue;
      u64 e = 0;
      while (m % q == 0) {
        m /= q;
        ++e;
      }
      tau *= (e + 1);
    }
    if (m > 1) tau *= 2;
    brute += cn * static_cast<double>(tau) * static_cast<double>(tau);
  }
  CHECK(res.value == Catch::Approx(brute).margin(1e-9));
  CHECK(res.bound >= 0.0);
}

TEST_CASE("rough tail sums of lambda(m)/m") {
  quad_char c5 = make_character(5);
  CHECK(exzero_sum(c5, 10.0, 5.0) == 0.0);
  CHECK(exzero_sum(c5, 10.0, 100.0) ==
        Catch::Approx(0.6119860440151506).epsilon(1e-12));
  double v150 = exzero_sum(c5, 10.0, 150.0);
  double brute = 0.0;
  for (u64 m = 10; m <= 150; ++m) {
    if (!rough_ref(m, 10.0)) continue;
    brute += lambda_ref(c5, m) / static_cast<double>(m);
  }
  CHECK(v150 == Catch::Approx(brute).epsilon(1e-12));
  // the step from 100 to 150 includes m = 121 with lambda = 3
  quad_char& chi = c5;
  CHECK(lambda_ref(chi, 121) == 3.0);
  double eta = l_one(c5, 1e-6).eta;
  CHECK(exzero_bound(c5, 10.0, 150.0, eta) > 0.0);
}

TEST_CASE("rough chi log sums against the Mertens product") {
  quad_char c5 = make_character(5);
  auto r = chisums_ratio(c5, 10.0, 5, 100.0);
  CHECK(r.lhs == Catch::Approx(std::log(100.0)).epsilon(1e-12));  // only n = 1
  CHECK(r.rhs == Catch::Approx(35.0 / 8.0).epsilon(1e-12));

  auto big = chisums_ratio(c5, 10.0, 100000, 100000.0);
  CHECK(std::isfinite(big.ratio));
  CHECK(big.rhs == Catch::Approx(4.375).epsilon(1e-12));
}

namespace {

// Independent four-fold loop; same term expression and the same canonical
// sorted summation as the library so agreement is exact.
double quadruple_oracle(const divisor_windows& win, i64 h, int sign,
                        const char_modes& modes, double z, const quad_char& chi,
                        u64* tuple_count = nullptr) {
  auto cval = [&](bool use_chi, u64 v) {
    return use_chi ? chi.chi(v) : chi.principal(v);
  };
  std::vector<double> terms;
  u64 count = 0;
  u64 m1_lo = static_cast<u64>(std::ceil(win.M1));
  u64 m1_hi = static_cast<u64>(std::floor(2.0 * win.M1));
  u64 n1_lo = static_cast<u64>(std::ceil(win.N1));
  u64 n1_hi = static_cast<u64>(std::floor(2.0 * win.N1));
  u64 m2_lo = static_cast<u64>(std::ceil(win.M2));
  u64 m2_hi = static_cast<u64>(std::floor(2.0 * win.M2));
  for (u64 m1 = std::max<u64>(1, m1_lo); m1 <= m1_hi; ++m1) {
    if (!rough_ref(m1, z)) continue;
    double g1 = win.g(static_cast<double>(m1) / win.M1);
    if (g1 == 0.0) continue;
    int c1 = cval(modes.chi1, m1);
    if (c1 == 0) continue;
    for (u64 n1 = std::max<u64>(1, n1_lo); n1 <= n1_hi; ++n1) {
      if (!rough_ref(n1, z)) continue;
      double g3 = win.g(static_cast<double>(n1) / win.N1);
      if (g3 == 0.0) continue;
      int c3 = cval(modes.psi1, n1);
      if (c3 == 0) continue;
      for (u64 m2 = std::max<u64>(1, m2_lo); m2 <= m2_hi; ++m2) {
        ++count;
        i64 t = sign * static_cast<i64>(m1 * n1) + h;
        if (t < 1) continue;
        if (static_cast<u64>(t) % m2) continue;
        u64 n2 = static_cast<u64>(t) / m2;
        if (!rough_ref(m2, z) || !rough_ref(n2, z)) continue;
        double g2 = win.g(static_cast<double>(m2) / win.M2);
        double g4 = win.g(static_cast<double>(n2) / win.N2);
        if (g2 == 0.0 || g4 == 0.0) continue;
        int c2 = cval(modes.chi2, m2);
        int c4 = cval(modes.psi2, n2);
        if (c2 == 0 || c4 == 0) continue;
        double term = static_cast<double>(c1 * c2 * c3 * c4) * (g1 * g2 * g3 * g4);
        if (term != 0.0) terms.push_back(term);
      }
    }
  }
  if (tuple_count) *tuple_count = count;
  std::sort(terms.begin(), terms.end());
  kahan acc;
  for (double t : terms) acc.add(t);
  return acc.total();
}

}  // namespace

TEST_CASE("divisor correlations match the four-fold oracle exactly") {
  quad_char c5 = make_character(5);

  SECTION("unsolvable shift gives zero") {
    divisor_windows win = make_divisor_windows(4, 4, 16, 16, 0.1);
    CHECK(divisor_correlation(win, 1000000, +1, char_modes{}, 2.0, c5) == 0.0);
  }

  SECTION("several seeded instances, all four mode patterns") {
    splitmix64 rng(2024);
    for (int inst = 0; inst < 6; ++inst) {
      double M1 = 2.0 + rng.below(6);
      double N1 = M1 * (2.0 + rng.below(4));
      double M2 = 2.0 + rng.below(6);
      double N2 = (M1 * N1) / M2 * (0.8 + 0.1 * rng.below(5));
      if (N2 < M2) std::swap(M2, N2);
      double delta = 0.08 + 0.02 * rng.below(4);
      double z = (inst % 2) ? 3.0 : 2.0;
      i64 h = static_cast<i64>(1 + rng.below(40));
      int sign = (inst % 3 == 0) ? -1 : +1;
      char_modes modes{(rng.next() & 1) != 0, (rng.next() & 1) != 0,
                       (rng.next() & 1) != 0, (rng.next() & 1) != 0};
      divisor_windows win = make_divisor_windows(M1, M2, N1, N2, delta);
      double lib = divisor_correlation(win, h, sign, modes, z, c5);
      double ora = quadruple_oracle(win, h, sign, modes, z, c5);
      CAPTURE(inst, M1, M2, N1, N2, h, sign, z);
      REQUIRE(lib == ora);  // bitwise: same terms, same canonical order
    }
  }

  SECTION("all-principal weighted representation count") {
    divisor_windows win = make_divisor_windows(3, 3, 12, 12, 0.1);
    char_modes pr{false, false, false, false};
    double lib = divisor_correlation(win, 6, +1, pr, 2.0, c5);
    double ora = quadruple_oracle(win, 6, +1, pr, 2.0, c5);
    CHECK(lib == ora);
    // independent convolution route: L(n) and R(n) tables
    u64 lo = 36, hi = 160;
    std::vector<double> L(hi - lo, 0.0), R(hi - lo, 0.0);
    for (u64 m = 3; m <= 6; ++m)
      for (u64 n = 12; n <= 24; ++n) {
        u64 t = m * n;
        if (t < lo || t >= hi) continue;
        if (c5.principal(m) && c5.principal(n)) {
          L[t - lo] += win.g(m / 3.0) * win.g(n / 12.0);
          R[t - lo] += win.g(m / 3.0) * win.g(n / 12.0);
        }
      }
    double conv = 0.0;
    for (u64 t = lo; t < hi; ++t) {
      i64 u = static_cast<i64>(t) + 6;
      if (u >= static_cast<i64>(lo) && u < static_cast<i64>(hi))
        conv += L[t - lo] * R[u - lo];
    }
    CHECK(lib == Catch::Approx(conv).epsilon(1e-9));
  }
}

TEST_CASE("divisor correlation main term") {
  quad_char c5 = make_character(5);

  SECTION("vanishing psi-sum forces a zero main term") {
    divisor_windows win = make_divisor_windows(4, 4, 16, 16, 0.1);
    char_modes modes{false, false, true, false};  // psi1 = chi, psi2 = principal
    // q | h: gamma sum = sum chi(g) chi0(g) = 0
    double main = divisor_correlation_main(win, 10, +1, modes, 2.0, c5);
    CHECK(main == 0.0);
  }

  SECTION("principal gamma-sum equals the closed form") {
    divisor_windows win = make_divisor_windows(4, 4, 16, 16, 0.1);
    char_modes pr{false, false, false, false};
    double main = divisor_correlation_main(win, 2, +1, pr, 2.0, c5);
    // gamma factor should be (1 - 2/5) = 3/5 of the z-local-free double sum
    rat cs = complete_char_sum({&c5, char_sum_mode::principal_principal, 2, +1});
    CHECK(cs == rat_make(3, 5));
    CHECK(std::isfinite(main));
  }

  SECTION("empirical to main-term ratio is recorded on a desk instance") {
    divisor_windows win = make_divisor_windows(6, 6, 36, 36, 0.1);
    char_modes pr{false, false, false, false};
    double emp = divisor_correlation(win, 2, +1, pr, 2.0, c5);
    double main = divisor_correlation_main(win, 2, +1, pr, 2.0, c5);
    CAPTURE(emp, main, emp / main);
    CHECK(std::isfinite(emp / main));
  }
}

TEST_CASE("short interval variance") {
  CHECK(short_interval_variance(10, 1) ==
        Catch::Approx(16.638850446457223).epsilon(1e-12));

  SECTION("event sweep equals dense Riemann sampling within sampling error") {
    for (u64 X : {u64(100), u64(1000)}) {
      u64 H = 10;
      double exact = short_interval_variance(X, H);
      // left-endpoint Riemann sum; integrand is piecewise constant with at
      // most 2 pi(2X+H) + 2 pieces
      const u64 samples = 100000;
      double dy = static_cast<double>(X) / samples;
      arith_segment seg = build_segment(X + 1, 2 * X + H + 1);
      double riemann = 0.0;
      double maxf = 0.0;
      for (u64 i = 0; i < samples; ++i) {
        double y = static_cast<double>(X) + i * dy;
        u64 t = static_cast<u64>(y);
        double S = 0.0;
        for (u64 n = t + 1; n <= t + H; ++n) S += seg.vm_at(n);
        double f = (S - H) * (S - H);
        riemann += f * dy;
        maxf = std::max(maxf, f);
      }
      u64 pieces = 2;
      for (u64 n = X + 1; n <= 2 * X + H; ++n)
        if (seg.vm_at(n) > 0) pieces += 2;
      double bound = static_cast<double>(pieces) * dy * maxf;
      CAPTURE(X, exact, riemann, bound);
      REQUIRE(std::abs(exact - riemann) <= bound);
    }
  }

  SECTION("desk-scale ratio lands near the classical heuristic") {
    double v = short_interval_variance(1000000, 1000, 2);
    double ratio = v / (1000.0 * 1e6 * std::log(1e6));
    CHECK(ratio > 0.3);
    CHECK(ratio < 3.0);
  }

  SECTION("thread count does not change the result") {
    CHECK(short_interval_variance(30000, 50, 1) ==
          short_interval_variance(30000, 50, 2));
  }
}

TEST_CASE("averaged h/phi(h) stays linear") {
  const u64 H = 100000;
  std::vector<u64> phi(H + 1);
  for (u64 i = 0; i <= H; ++i) phi[i] = i;
  for (u64 p = 2; p <= H; ++p) {
    if (phi[p] != p) continue;
    for (u64 m = p; m <= H; m += p) phi[m] -= phi[m] / p;
  }
  kahan acc;
  for (u64 h = 1; h <= H; ++h) {
    acc.add(2.0 * static_cast<double>(h) / static_cast<double>(phi[h]));
    if (h == 10 || h == 1000 || h == 100000) {
      CAPTURE(h);
      REQUIRE(acc.total() <= 4.0 * static_cast<double>(h));
    }
  }
}

TEST_CASE("comparison reports") {
  corr_report odd = compare_twin(1000, 7);
  CHECK(odd.degenerate);
  CHECK(odd.predicted == 0.0);

  quad_char c5 = make_character(5);
  corr_report r = compare_twin(100000, 10, &c5);
  CHECK(r.budget_C == 1.0);
  CHECK(r.budget_eps == 0.1);
  CHECK(r.kappa == Catch::Approx(2.0));
  CHECK(r.d == 5);
  CHECK(r.u >= 2.0);
  CHECK(r.z == Catch::Approx(std::pow(1e5, 1.0 / r.u)).epsilon(1e-12));
  CHECK(std::isfinite(r.err_budget[0]));
  CHECK(std::isfinite(r.err_budget[1]));
  CHECK(std::isfinite(r.err_budget[2]));
  CHECK(!r.degenerate);
  CHECK(r.ratio == Catch::Approx(r.empirical / r.predicted));

  corr_report gb = compare_goldbach(10000);
  CHECK(gb.kappa == 1.0);
  CHECK(gb.ratio > 0.5);
  CHECK(gb.ratio < 1.5);
}
