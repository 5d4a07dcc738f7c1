// expsums.hpp
//
// Complete character sums over one period (closed form vs direct enumeration
// as exact rationals), Kloosterman and Ramanujan sums by direct evaluation,
// incomplete Kloosterman sums with their square-root cancellation bound as a
// diagnostic, and gcd-sum inequalities.  Bounds carry unit implied constants
// and are reported, never asserted.

#pragma once

#include <complex>
#include <numeric>

#include "primecorr/arith.hpp"
#include "primecorr/characters.hpp"
#include "primecorr/common.hpp"
#include "primecorr/rational.hpp"
#include "primecorr/smooth.hpp"

namespace primecorr {

enum class char_sum_mode { principal_principal, chi_principal, chi_chi };

struct char_sum_spec {
  const quad_char* chi = nullptr;
  char_sum_mode mode = char_sum_mode::chi_chi;
  i64 h = 2;
  int sign = +1;  // +1 or -1
};

// (1/q) sum_{m mod q} chi_a(m) chi_b(sign*m + h) for the three mode choices,
// evaluated in closed form by multiplying the prime-component sums.  For the
// mixed mode the component product gives (-1)^omega(q) chi(-sign h)/q, and
// for odd q the dyadic indicator factor is absent; both reduce to the
// familiar prime-modulus statements.
inline rat complete_char_sum(const char_sum_spec& spec) {
  if (spec.chi == nullptr) throw validation_error("char_sum: missing character");
  if (spec.sign != 1 && spec.sign != -1)
    throw validation_error("char_sum: sign must be +1 or -1");
  const quad_char& chi = *spec.chi;
  i64 q = static_cast<i64>(chi.q);
  u64 ha = static_cast<u64>(spec.h < 0 ? -spec.h : spec.h);

  auto q_primes = factorize(chi.q);
  switch (spec.mode) {
    case char_sum_mode::principal_principal: {
      rat v = rat_make(1, 1);
      for (auto [p, e] : q_primes) {
        i64 ps = static_cast<i64>(p);
        if (ha % p == 0)
          v = rat_mul(v, rat_make(ps - 1, ps));
        else
          v = rat_mul(v, rat_make(ps - 2, ps));
      }
      return v;
    }
    case char_sum_mode::chi_principal: {
      if (chi.r > 0) return rat_make(0, 1);  // dyadic component vanishes
      i64 m0 = -spec.sign * spec.h;
      int omega = static_cast<int>(q_primes.size());
      int sgn = (omega % 2 == 0) ? 1 : -1;
      return rat_make(sgn * chi.chi_int(m0), q);
    }
    case char_sum_mode::chi_chi: {
      rat v = rat_make(1, 1);
      if (chi.r > 0) {
        u64 phi2r = u64(1) << (chi.r - 1);
        if (ha % phi2r != 0) return rat_make(0, 1);
        if ((ha / phi2r) % 2 == 1) v = rat_make(-1, 1);
      }
      if (spec.sign < 0 && chi.parity < 0) v = rat_mul(v, rat_make(-1, 1));
      for (auto [p, e] : q_primes) {
        i64 ps = static_cast<i64>(p);
        if (ha % p == 0)
          v = rat_mul(v, rat_make(ps - 1, ps));
        else
          v = rat_mul(v, rat_make(-1, ps));
      }
      return v;
    }
  }
  throw validation_error("char_sum: unknown mode");
}

// Direct enumeration over m mod q; exact integer numerator over q.
inline rat complete_char_sum_bruteforce(const char_sum_spec& spec,
                                        u64 budget = 1'000'000) {
  if (spec.chi == nullptr) throw validation_error("char_sum: missing character");
  const quad_char& chi = *spec.chi;
  if (chi.q > budget)
    throw budget_error("char_sum_bruteforce: modulus " + std::to_string(chi.q) +
                       " exceeds enumeration budget " + std::to_string(budget));
  i64 q = static_cast<i64>(chi.q);
  i64 total = 0;
  for (i64 m = 0; m < q; ++m) {
    i64 t = spec.sign * m + spec.h;
    t %= q;
    if (t < 0) t += q;
    int a, b;
    switch (spec.mode) {
      case char_sum_mode::principal_principal:
        a = chi.principal(static_cast<u64>(m));
        b = chi.principal(static_cast<u64>(t));
        break;
      case char_sum_mode::chi_principal:
        a = chi.chi(static_cast<u64>(m));
        b = chi.principal(static_cast<u64>(t));
        break;
      default:
        a = chi.chi(static_cast<u64>(m));
        b = chi.chi(static_cast<u64>(t));
        break;
    }
    total += static_cast<i64>(a) * b;
  }
  return rat_make(total, q);
}

inline i64 mod_inverse(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    i64 qt = g / a1;
    g -= qt * a1;
    std::swap(g, a1);
    x -= qt * x1;
    std::swap(x, x1);
  }
  if (g != 1) return -1;  // not invertible
  return ((x % m) + m) % m;
}

struct kloosterman_input {
  i64 a = 0;
  i64 b = 0;
  u64 c = 1;
};

// S(a,b;c) = sum_{n mod c, (n,c)=1} e_c(a n + b nbar), direct O(c log c).
// The sum is real (n -> -n pairs terms into conjugates); the imaginary part
// is asserted small rather than assumed.
inline std::complex<double> kloosterman(const kloosterman_input& in) {
  if (in.c < 1) throw validation_error("kloosterman: need c >= 1");
  i64 c = static_cast<i64>(in.c);
  double w = 2.0 * M_PI / static_cast<double>(c);
  kahan re, im;
  for (i64 n = 1; n <= c; ++n) {
    if (std::gcd(n, c) != 1) continue;
    i64 nb = (c == 1) ? 0 : mod_inverse(n, c);
    i64 e = ((in.a % c) * (n % c) % c + (in.b % c) * nb % c) % c;
    e = ((e % c) + c) % c;
    re.add(std::cos(w * static_cast<double>(e)));
    im.add(std::sin(w * static_cast<double>(e)));
  }
  std::complex<double> s(re.total(), im.total());
  if (std::abs(s.imag()) > 1e-9 * std::max(1.0, std::abs(s.real())) &&
      std::abs(s.imag()) > 1e-9 * std::sqrt(static_cast<double>(in.c)))
    throw numeric_error("kloosterman: imaginary part " +
                        std::to_string(s.imag()) + " fails the reality check");
  return s;
}

inline double kloosterman_real(i64 a, i64 b, u64 c) {
  return kloosterman(kloosterman_input{a, b, c}).real();
}

// Ramanujan sum S(0,b;c): direct evaluation and the mu/gcd closed form
// sum_{d | (b,c)} mu(c/d) d must agree.
inline double ramanujan(i64 b, u64 c) {
  if (c < 1) throw validation_error("ramanujan: need c >= 1");
  u64 g = std::gcd(static_cast<u64>(b < 0 ? -b : b), c);
  i64 closed = 0;
  for (u64 dd = 1; dd <= g; ++dd) {
    if (g % dd != 0) continue;
    int mu = 1;
    bool squarefree = true;
    for (auto [p, e] : factorize(c / dd)) {
      if (e >= 2) {
        squarefree = false;
        break;
      }
      mu = -mu;
    }
    if (squarefree) closed += static_cast<i64>(dd) * mu;
  }
  double direct = kloosterman_real(0, b, c);
  if (std::abs(direct - static_cast<double>(closed)) >
      1e-6 * std::max(1.0, std::abs(direct)))
    throw numeric_error("ramanujan: direct sum and closed form disagree");
  return static_cast<double>(closed);
}

struct incomplete_kloosterman_result {
  std::complex<double> value;
  double bound = 0.0;  // delta^{-1} d^{1/2+eps} + N (d,k) / (d q)
  double eps = 0.1;
  double implied_constant = 1.0;  // diagnostic only
};

// sum_{n = alpha (mod q), (n,d)=1} F(n/N) e_d(k * inv(e*n mod d)), where F is
// a plateau window supported on [1,2].
inline incomplete_kloosterman_result incomplete_kloosterman(
    const smooth_window& F, double N, i64 alpha, u64 q, u64 d, i64 e, i64 k) {
  if (d < 1 || q < 1)
    throw validation_error("incomplete_kloosterman: need d, q >= 1");
  i64 di = static_cast<i64>(d);
  u64 em = static_cast<u64>(((e % di) + di) % di);
  if (d > 1 && (std::gcd(em, d) != 1 || std::gcd(q, d) != 1))
    throw validation_error("incomplete_kloosterman: need gcd(e q, d) = 1");
  double w = 2.0 * M_PI / static_cast<double>(d);
  kahan re, im;
  i64 lo = static_cast<i64>(std::floor(N)) - 1;
  i64 hi = static_cast<i64>(std::ceil(2.0 * N)) + 1;
  for (i64 n = std::max<i64>(1, lo); n <= hi; ++n) {
    if ((((n - alpha) % static_cast<i64>(q)) + q) % q != 0) continue;
    if (d > 1 && std::gcd(static_cast<u64>(n) % d, d) != 1) continue;
    double f = F(static_cast<double>(n) / N);
    if (f == 0.0) continue;
    i64 ph = 0;
    if (d > 1) {
      i64 en = static_cast<i64>((em * (static_cast<u64>(n) % d)) % d);
      i64 inv = mod_inverse(en, di);
      ph = (((k % di) * inv) % di + di) % di;
    }
    re.add(f * std::cos(w * static_cast<double>(ph)));
    im.add(f * std::sin(w * static_cast<double>(ph)));
  }
  incomplete_kloosterman_result out;
  out.value = {re.total(), im.total()};
  u64 gk = std::gcd(static_cast<u64>(k < 0 ? -k : k), d);
  if (k == 0) gk = d;
  out.bound = (1.0 / F.delta) * std::pow(static_cast<double>(d), 0.5 + out.eps) +
              N * static_cast<double>(gk) /
                  (static_cast<double>(d) * static_cast<double>(q));
  return out;
}

struct gcd_sum_result {
  double sum = 0.0;
  double bound = 0.0;
};

// sum_{1<=l<=L} (l,q), bounded by tau(q) L; weighted variant multiplies each
// term by l/phi(l), bounded by 2 tau(q)^2 L (constant calibrated over the
// test grid L, q <= 1e4; worst observed ratio 1.944 at q = 1).
inline gcd_sum_result gcd_sum(u64 L, i64 q, bool weighted) {
  if (L < 1) throw validation_error("gcd_sum: need L >= 1");
  if (q == 0) throw validation_error("gcd_sum: need q != 0");
  u64 qa = static_cast<u64>(q < 0 ? -q : q);
  double tau_q = multiplicative_eval(mult_fn::tau_power, qa, 1);
  gcd_sum_result out;
  kahan acc;
  if (!weighted) {
    for (u64 l = 1; l <= L; ++l)
      acc.add(static_cast<double>(std::gcd(l, qa)));
    out.bound = tau_q * static_cast<double>(L);
  } else {
    // phi by sieve up to L
    std::vector<u64> phi(L + 1);
    for (u64 i = 0; i <= L; ++i) phi[i] = i;
    for (u64 p = 2; p <= L; ++p) {
      if (phi[p] != p) continue;  // p prime
      for (u64 m = p; m <= L; m += p) phi[m] -= phi[m] / p;
    }
    for (u64 l = 1; l <= L; ++l)
      acc.add(static_cast<double>(std::gcd(l, qa)) * static_cast<double>(l) /
              static_cast<double>(phi[l]));
    out.bound = 2.0 * tau_q * tau_q * static_cast<double>(L);
  }
  out.sum = acc.total();
  return out;
}

}  // namespace primecorr
