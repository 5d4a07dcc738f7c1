#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "primecorr/singular.hpp"

using namespace primecorr;

TEST_CASE("singular series basic values") {
  CHECK(singular_series(7).value == 0.0);
  CHECK(singular_series(-9).value == 0.0);

  singular_value s2 = singular_series(2);
  CHECK(s2.value == Catch::Approx(1.3203236).epsilon(2e-6));
  CHECK(s2.err > 0.0);
  CHECK(s2.err < 1e-5);

  // p = 3 contributes 1 + 1/(3-2) = 2
  CHECK(singular_series(6).value == 2.0 * s2.value);
  CHECK(singular_series(-2).value == s2.value);
  CHECK_THROWS_AS(singular_series(0), validation_error);
}

TEST_CASE("ratio to the universal constant is the finite product") {
  double s2 = singular_series(2).value;
  for (i64 h = 1; h <= 10000; h += 7) {
    double ratio = singular_series(2 * h).value / s2;
    double expect = 1.0;
    i64 m = h;
    while (m % 2 == 0) m /= 2;
    for (i64 p = 3; p * p <= m; p += 2) {
      if (m % p) continue;
      expect *= 1.0 + 1.0 / (static_cast<double>(p) - 2.0);
      while (m % p == 0) m /= p;
    }
    if (m > 2) expect *= 1.0 + 1.0 / (static_cast<double>(m) - 2.0);
    CAPTURE(h);
    REQUIRE(ratio == Catch::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("correction factor on the quoted cases") {
  quad_char c12 = make_character(12);
  CHECK(correction_factor(8, c12, pair_kind::twin).kappa ==
        Catch::Approx(0.0).margin(1e-15));

  quad_char c5 = make_character(5);
  CHECK(correction_factor(10, c5, pair_kind::twin).kappa ==
        Catch::Approx(2.0).epsilon(1e-15));

  quad_char cm3 = make_character(-3);
  CHECK(correction_factor(6, cm3, pair_kind::goldbach).kappa ==
        Catch::Approx(0.0).margin(1e-15));
  // twin mode has no parity flip: 1 + 1 = 2
  CHECK(correction_factor(6, cm3, pair_kind::twin).kappa ==
        Catch::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(correction_factor(3, c5, pair_kind::twin), validation_error);
}

TEST_CASE("goldbach mode flips by parity over a grid") {
  for (i64 a = 3; a <= 300; ++a) {
    for (i64 d : {a, -a}) {
      if (!is_fundamental(d)) continue;
      quad_char chi = make_character(d);
      for (i64 h = 2; h <= 2 * static_cast<i64>(chi.q); h += 2) {
        double kt = correction_factor(h, chi, pair_kind::twin).kappa;
        double kg = correction_factor(h, chi, pair_kind::goldbach).kappa;
        CAPTURE(d, h);
        REQUIRE(kt >= 0.0);
        REQUIRE(kt <= 2.0);
        REQUIRE(kg >= 0.0);
        REQUIRE(kg <= 2.0);
        if (chi.parity == 1) {
          REQUIRE(kt == kg);
        } else {
          REQUIRE(kg == Catch::Approx(1.0 - (kt - 1.0)).margin(1e-14));
        }
      }
    }
  }
}

TEST_CASE("predicted main terms") {
  double s2 = singular_series(2).value;
  CHECK(predicted_main(pair_kind::twin, 1e6, 2) ==
        Catch::Approx(s2 * 1e6).epsilon(1e-12));

  quad_char c12 = make_character(12);
  CHECK(predicted_main(pair_kind::twin, 1e6, 8, &c12) ==
        Catch::Approx(0.0).margin(1e-9));

  quad_char c5 = make_character(5);
  double s10 = singular_series(10).value;
  CHECK(predicted_main(pair_kind::goldbach, 10.0, 10, &c5) ==
        Catch::Approx(10.0 * s10 * 2.0).epsilon(1e-12));

  CHECK(predicted_main(pair_kind::twin, 100.0, 7) == 0.0);
}

TEST_CASE("weighted average of the singular series") {
  CHECK(avg_singular_series(2) == 0.0);
  CHECK(avg_singular_series(3) ==
        Catch::Approx(2.0 * singular_series(2).value).epsilon(1e-12));

  double direct = avg_singular_series_direct(2000);
  double rearranged = avg_singular_series_rearranged(2000);
  CHECK(direct == Catch::Approx(rearranged).epsilon(1e-11));

  double a4 = avg_singular_series(10000);
  CHECK(std::abs(a4 / 1e8 - 1.0) < 0.01);

  double a3 = avg_singular_series(1000);
  CHECK(std::abs(a4 / 1e8 - 1.0) < std::abs(a3 / 1e6 - 1.0));

  CHECK_THROWS_AS(avg_singular_series(1), validation_error);
}

TEST_CASE("singular value tracks h/phi(h) within fixed constants") {
  // S_h / (h/phi(h)) = C2 * prod_{p|h, p>2} (1 - 1/(p-1)^2)^{-1} in [C2, 1)
  for (i64 h = 2; h <= 10000; h += 2) {
    double ratio = singular_series(h).value /
                   multiplicative_eval(mult_fn::n_over_phi, static_cast<u64>(h));
    CAPTURE(h);
    REQUIRE(ratio >= 0.66);
    REQUIRE(ratio <= 1.0);
  }
}

TEST_CASE("twin constant cutoff validation") {
  CHECK_THROWS_AS(twin_constant(1000), validation_error);
  euler_product e = twin_constant();
  CHECK(e.value == Catch::Approx(1.32032363169).epsilon(1e-6));
}
