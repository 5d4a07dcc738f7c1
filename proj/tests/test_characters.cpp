#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "primecorr/characters.hpp"

using namespace primecorr;

namespace {

std::vector<i64> fundamentals(i64 bound) {
  std::vector<i64> out;
  for (i64 a = 3; a <= bound; ++a) {
    if (is_fundamental(a)) out.push_back(a);
    if (is_fundamental(-a)) out.push_back(-a);
  }
  return out;
}

}  // namespace

TEST_CASE("kronecker symbol values") {
  CHECK(kronecker(5, 2) == -1);  // 2 is not a square mod 5
  for (i64 d : {i64(5), i64(-4), i64(12), i64(-163), i64(97)})
    CHECK(kronecker(d, 1) == 1);
  CHECK(kronecker(-4, 2) == 0);
  CHECK(kronecker(5, 0) == 0);
  CHECK(kronecker(1, 0) == 1);
}

TEST_CASE("kronecker agrees with the Euler criterion at odd primes") {
  // independent oracle: (d|p) = d^{(p-1)/2} mod p for odd primes p not | d
  auto powmod = [](i64 base, u64 e, u64 m) {
    u64 b = static_cast<u64>(((base % static_cast<i64>(m)) + m) % m);
    u64 r = 1;
    while (e) {
      if (e & 1) r = r * b % m;
      b = b * b % m;
      e >>= 1;
    }
    return r;
  };
  for (i64 d : {i64(5), i64(-4), i64(12), i64(-7), i64(8), i64(-8), i64(21),
                i64(-163), i64(229)}) {
    for (u64 p : {u64(3), u64(5), u64(7), u64(11), u64(13), u64(101), u64(499),
                  u64(1009), u64(7919)}) {
      if (static_cast<u64>(d < 0 ? -d : d) % p == 0) continue;
      u64 r = powmod(d, (p - 1) / 2, p);
      int euler = (r == 1) ? 1 : -1;  // r is 1 or p-1
      CAPTURE(d, p);
      REQUIRE(kronecker(d, static_cast<i64>(p)) == euler);
    }
  }
}

TEST_CASE("character construction and factorization fields") {
  quad_char a = make_character(-4);
  CHECK(a.q == 4);
  CHECK(a.r == 2);
  CHECK(a.q_odd == 1);
  CHECK(a.parity == -1);

  quad_char b = make_character(12);
  CHECK(b.q == 12);
  CHECK(b.r == 2);
  CHECK(b.q_odd == 3);
  CHECK(b.parity == 1);

  quad_char c = make_character(5);
  CHECK(c.q == 5);
  CHECK(c.r == 0);
  CHECK(c.q_odd == 5);
  CHECK(c.parity == 1);

  CHECK_THROWS_AS(make_character(6), validation_error);
  try {
    make_character(6);
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("mod 4") != std::string::npos);
  }
  CHECK_THROWS_AS(make_character(0), validation_error);
  CHECK_THROWS_AS(make_character(45), validation_error);  // 45 = 9*5 not squarefree
  CHECK_THROWS_AS(make_character(2), validation_error);
}

TEST_CASE("periodicity over a grid") {
  for (i64 d : fundamentals(300)) {
    u64 q = static_cast<u64>(d < 0 ? -d : d);
    for (i64 n = 1; n <= 10000; n += 97) {
      REQUIRE(kronecker(d, n) == kronecker(d, n + static_cast<i64>(q)));
    }
  }
}

TEST_CASE("complete multiplicativity") {
  for (i64 d : fundamentals(60)) {
    quad_char chi = make_character(d);
    for (u64 m = 1; m <= 500; ++m)
      for (u64 n = 1; n <= 500; ++n) {
        if (chi.chi(m * n) != chi.chi(m) * chi.chi(n)) {
          CAPTURE(d, m, n);
          REQUIRE(chi.chi(m * n) == chi.chi(m) * chi.chi(n));
        }
      }
  }
}

TEST_CASE("primitivity: no proper period on coprime residues") {
  for (i64 d : fundamentals(300)) {
    quad_char chi = make_character(d);
    u64 q = chi.q;
    for (u64 q1 = 1; q1 < q; ++q1) {
      if (q % q1 != 0) continue;
      bool splits = false;  // found m = n (mod q1), both coprime, chi differs
      std::vector<int> seen(q1, 2);  // 2 = unseen
      for (u64 m = 0; m < q && !splits; ++m) {
        int v = chi.chi(m);
        if (v == 0) continue;
        u64 r = m % q1;
        if (seen[r] == 2)
          seen[r] = v;
        else if (seen[r] != v)
          splits = true;
      }
      CAPTURE(d, q1);
      REQUIRE(splits);
    }
  }
}

TEST_CASE("parity equals the sign of the discriminant") {
  for (i64 d : fundamentals(300)) {
    quad_char chi = make_character(d);
    CHECK(chi.chi_int(-1) == (d < 0 ? -1 : 1));
    CHECK(chi.parity == (d < 0 ? -1 : 1));
  }
}

TEST_CASE("L(1,chi) certified intervals contain the class-number values") {
  const double sqrt5 = std::sqrt(5.0), sqrt13 = std::sqrt(13.0);
  struct oracle {
    i64 d;
    double L;
  } cases[] = {
      {-3, M_PI / std::pow(3.0, 1.5)},
      {-4, M_PI / 4.0},
      {5, 2.0 / sqrt5 * std::log((1.0 + sqrt5) / 2.0)},
      {-7, M_PI / std::sqrt(7.0)},
      {8, std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0)},
      {-8, M_PI / (2.0 * std::sqrt(2.0))},
      {13, 2.0 / sqrt13 * std::log((3.0 + sqrt13) / 2.0)},
  };
  for (const auto& c : cases) {
    quad_char chi = make_character(c.d);
    lvalue L = l_one(chi, 1e-7);
    CAPTURE(c.d, L.value, L.err, c.L);
    REQUIRE(std::abs(L.value - c.L) <= L.err);
    REQUIRE(L.err <= 1.1e-7);
    REQUIRE(L.value - L.err > 0.0);
  }
}

TEST_CASE("effective eta values and interval propagation") {
  quad_char c5 = make_character(5);
  eta_interval e5 = effective_eta(c5, 1e-7);
  CHECK(e5.eta == Catch::Approx(1.4436).epsilon(2e-4));
  CHECK(e5.lo <= e5.eta);
  CHECK(e5.eta <= e5.hi);

  quad_char c4 = make_character(-4);
  eta_interval e4 = effective_eta(c4, 1e-7);
  CHECK(e4.eta == Catch::Approx(0.9185).epsilon(2e-4));

  // definition inversion: eta * (L log q) = 1
  lvalue L = l_one(c5, 1e-7);
  CHECK(L.eta * (L.value * std::log(5.0)) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ranking by effective eta") {
  // closed forms give eta(-3) = 1.5055 > eta(5) = 1.4436 > eta(-4) = 0.9184
  auto ranked = most_exceptional(std::vector<i64>{-3, -4, 5}, 1e-6);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].first == -3);
  CHECK(ranked[1].first == 5);
  CHECK(ranked[2].first == -4);
  CHECK(ranked[0].second == Catch::Approx(1.50552).epsilon(1e-3));

  auto single = most_exceptional(std::vector<i64>{8});
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == 8);

  auto empty = most_exceptional(6, 7);  // no fundamental discriminants there
  CHECK(empty.empty());

  auto range = most_exceptional(-5, 5, 1e-6);
  REQUIRE(range.size() == 3);  // -3, -4, 5
  CHECK(range[0].first == -3);
}

TEST_CASE("l_one budget guard") {
  quad_char chi = make_character(-4);
  CHECK_THROWS_AS(l_one(chi, 1e-12), budget_error);
  CHECK_THROWS_AS(l_one(chi, 0.0), validation_error);
}
