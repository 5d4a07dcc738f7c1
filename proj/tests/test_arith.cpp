#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <thread>

#include "primecorr/arith.hpp"

using namespace primecorr;

namespace {

// trial-division reference for the rough indicator
bool rough_ref(u64 n, double z, u64 k) {
  for (u64 p = 2; static_cast<double>(p) < z; ++p) {
    bool prime = true;
    for (u64 d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    if (k % p == 0) continue;
    if (n % p == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("segment values at small n") {
  arith_segment seg = build_segment(1, 64);
  CHECK(seg.spf_at(12) == 2);
  CHECK(seg.mu_at(12) == 0);
  CHECK(seg.tau_at(12) == 6);
  CHECK(seg.vm_at(8) == Catch::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(seg.mu_at(30) == -1);
  CHECK(seg.tau_at(30) == 8);
  // n = 1 conventions
  CHECK(seg.spf_at(1) == 1);
  CHECK(seg.vm_at(1) == 0.0);
  CHECK(seg.mu_at(1) == 1);
  CHECK(seg.tau_at(1) == 1);
}

TEST_CASE("primes look like primes") {
  arith_segment seg = build_segment(2, 2000);
  for (u64 n = 2; n < 2000; ++n) {
    bool prime = true;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    CHECK(seg.spf_at(n) == n);
    CHECK(seg.mu_at(n) == -1);
    CHECK(seg.tau_at(n) == 2);
    CHECK(seg.vm_at(n) == Catch::Approx(std::log(static_cast<double>(n))));
  }
}

TEST_CASE("vm positive exactly on prime powers, mu zero exactly on squarefull") {
  arith_segment seg = build_segment(1, 5000);
  for (u64 n = 2; n < 5000; ++n) {
    u64 m = n;
    int distinct = 0;
    bool squarefree = true;
    for (u64 p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      ++distinct;
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (e > 1) squarefree = false;
    }
    if (m > 1) ++distinct;
    CHECK((seg.vm_at(n) > 0.0) == (distinct == 1));
    CHECK((seg.mu_at(n) == 0) == !squarefree);
  }
}

TEST_CASE("Chebyshev sanity at 1e6") {
  kahan acc;
  for (u64 lo = 1; lo <= 1000000; lo += 1 << 20) {
    u64 hi = std::min<u64>(1000001, lo + (1 << 20));
    arith_segment seg = build_segment(lo, hi);
    for (u64 n = lo; n < hi; ++n) acc.add(seg.vm_at(n));
  }
  double s = acc.total();
  CHECK(s >= 0.9e6);
  CHECK(s <= 1.1e6);
}

TEST_CASE("Moebius divisor sums collapse to [n=1]") {
  const u64 N = 10000;
  arith_segment seg = build_segment(1, N + 1);
  std::vector<int> acc(N + 1, 0);
  for (u64 d = 1; d <= N; ++d) {
    int mu = seg.mu_at(d);
    if (mu == 0) continue;
    for (u64 n = d; n <= N; n += d) acc[n] += mu;
  }
  CHECK(acc[1] == 1);
  for (u64 n = 2; n <= N; ++n) {
    if (acc[n] != 0) {
      CAPTURE(n);
      CHECK(acc[n] == 0);
      break;
    }
  }
}

TEST_CASE("rough mask examples and reference agreement") {
  rough_mask m1 = make_rough_mask(1, 101, 6.0, 1);
  CHECK(m1.at(77));        // 7 * 11, both >= 6
  CHECK_FALSE(m1.at(35));  // factor 5 < 6
  rough_mask m2 = make_rough_mask(1, 101, 6.0, 2);
  CHECK_FALSE(m2.at(10));  // factor 5 < 6 and 5 does not divide k
  rough_mask m3 = make_rough_mask(1, 101, 6.0, 6);
  CHECK(m3.at(12));  // factors 2, 3 divide k

  for (auto [z, k] : std::vector<std::pair<double, u64>>{
           {6.0, 1}, {6.0, 2}, {6.0, 6}, {2.5, 1}, {10.0, 30}, {31.5, 7}}) {
    rough_mask m = make_rough_mask(1, 100001, z, k);
    for (u64 n = 1; n <= 100000; n += 17) {
      CAPTURE(z, k, n);
      REQUIRE(m.at(n) == rough_ref(n, z, k));
    }
  }
}

TEST_CASE("multiplicative evaluation") {
  CHECK(multiplicative_eval(mult_fn::phi, 12) == 4.0);
  CHECK(multiplicative_eval(mult_fn::n_over_phi, 6) == 3.0);
  CHECK(multiplicative_eval(mult_fn::tau_power, 6, 2) == 16.0);
  CHECK(multiplicative_eval(mult_fn::phi, 1) == 1.0);
}

TEST_CASE("segment budget and validation errors") {
  CHECK_THROWS_AS(build_segment(1, 2 + (u64(1) << 24)), budget_error);
  try {
    build_segment(1, 2 + (u64(1) << 24));
  } catch (const budget_error& e) {
    CHECK(std::string(e.what()).find("16777216") != std::string::npos);
  }
  CHECK_THROWS_AS(build_segment(0, 10), validation_error);
  CHECK_THROWS_AS(build_segment(5, 5), validation_error);
  CHECK_THROWS_AS(make_rough_mask(1, 10, 1.0, 1), validation_error);
}

TEST_CASE("parallel construction of disjoint segments matches serial") {
  std::vector<arith_segment> par(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t]() {
      par[t] = build_segment(1 + 10000 * t, 1 + 10000 * (t + 1));
    });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 4; ++t) {
    arith_segment ser = build_segment(1 + 10000 * t, 1 + 10000 * (t + 1));
    REQUIRE(par[t].vm == ser.vm);
    REQUIRE(par[t].tau == ser.tau);
    REQUIRE(par[t].mu == ser.mu);
    REQUIRE(par[t].spf == ser.spf);
  }
}
