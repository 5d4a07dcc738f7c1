// rational.hpp
//
// Minimal exact rational type for the complete character sums, which are
// identities and therefore compared as rationals, never as floats.

#pragma once

#include <numeric>
#include <string>

#include "primecorr/common.hpp"

namespace primecorr {

struct rat {
  i64 num = 0;
  i64 den = 1;  // always > 0, gcd(num, den) = 1

  friend bool operator==(const rat& a, const rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const rat& a, const rat& b) { return !(a == b); }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

inline rat rat_make(i64 num, i64 den) {
  if (den == 0) throw numeric_error("rat: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return rat{num, den};
}

inline rat rat_mul(const rat& a, const rat& b) {
  i128 n = static_cast<i128>(a.num) * b.num;
  i128 d = static_cast<i128>(a.den) * b.den;
  i128 limit = static_cast<i128>(1) << 62;
  if (n > limit || n < -limit || d > limit)
    throw numeric_error("rat: overflow in multiply");
  return rat_make(static_cast<i64>(n), static_cast<i64>(d));
}

inline rat rat_add(const rat& a, const rat& b) {
  i128 n = static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den;
  i128 d = static_cast<i128>(a.den) * b.den;
  i128 limit = static_cast<i128>(1) << 62;
  if (n > limit || n < -limit || d > limit)
    throw numeric_error("rat: overflow in add");
  return rat_make(static_cast<i64>(n), static_cast<i64>(d));
}

}  // namespace primecorr
