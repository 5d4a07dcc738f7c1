// smooth.hpp
//
// The plateau bump used by every smoothed sum: supported on [1,2], equal to 1
// on [1+delta, 2-delta], built from the standard exp(-1/t) ramp so that the
// j-th derivative is bounded by C_j * delta^{-j} with C_j independent of
// delta.  Also the adaptive Simpson quadrature used by the main-term
// integrals.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <mutex>

#include "primecorr/common.hpp"

namespace primecorr {

namespace detail {

// C^infinity ramp: 0 at t<=0, 1 at t>=1.
inline double ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Supremum of |ramp^(j)| on [0,1] by central finite differences on a dense
// grid.  Computed once; these are the delta-free constants C_j.
inline const std::array<double, 5>& ramp_deriv_sup() {
  static std::array<double, 5> sup;
  static std::once_flag once;
  std::call_once(once, []() {
    const double h = 1.0 / 1024.0;
    const int grid = 4000;
    sup[0] = 1.0;
    for (int j = 1; j <= 4; ++j) sup[j] = 0.0;
    for (int i = 0; i <= grid; ++i) {
      double t = static_cast<double>(i) / grid;
      double f2 = ramp(t + 2 * h), f1 = ramp(t + h), f0 = ramp(t);
      double fm1 = ramp(t - h), fm2 = ramp(t - 2 * h);
      double d1 = (f1 - fm1) / (2 * h);
      double d2 = (f1 - 2 * f0 + fm1) / (h * h);
      double d3 = (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h);
      double d4 = (f2 - 4 * f1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
      sup[1] = std::max(sup[1], std::abs(d1));
      sup[2] = std::max(sup[2], std::abs(d2));
      sup[3] = std::max(sup[3], std::abs(d3));
      sup[4] = std::max(sup[4], std::abs(d4));
    }
    // headroom over finite-difference truncation
    for (int j = 1; j <= 4; ++j) sup[j] *= 1.05;
  });
  return sup;
}

}  // namespace detail

struct smooth_window {
  double delta = 0.1;
  std::array<double, 5> deriv_bound_consts{};  // |g^(j)| <= C_j delta^{-j}

  double operator()(double x) const {
    if (x <= 1.0 || x >= 2.0) return 0.0;
    if (x >= 1.0 + delta && x <= 2.0 - delta) return 1.0;
    if (x < 1.0 + delta) return detail::ramp((x - 1.0) / delta);
    return detail::ramp((2.0 - x) / delta);
  }

  // The ramp satisfies ramp(t) + ramp(1-t) = 1, so each ramp integrates to
  // delta/2 and the window integrates to exactly 1 - delta.
  double integral() const { return 1.0 - delta; }
};

inline smooth_window make_smooth_window(double delta) {
  if (!(delta > 0.0 && delta < 0.25))
    throw validation_error("smooth_window: need 0 < delta < 1/4");
  smooth_window g;
  g.delta = delta;
  g.deriv_bound_consts = detail::ramp_deriv_sup();
  return g;
}

// Adaptive Simpson with absolute tolerance; throws numeric_error with the
// achieved interval when the depth limit is hit before convergence.
namespace detail {

inline double simpson(const std::function<double(double)>& f, double a,
                      double fa, double m, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth, int max_depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, lm, flm, m, fm);
  double right = simpson(f, m, fm, rm, frm, b, fb);
  double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth >= max_depth)
    throw numeric_error("adaptive_simpson: depth limit reached, interval +-" +
                        std::to_string(std::abs(diff)));
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-8, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  double fa = f(a), fb = f(b);
  double m = 0.5 * (a + b), fm = f(m);
  double whole = detail::simpson(f, a, fa, m, fm, b, fb);
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth);
}

}  // namespace primecorr
