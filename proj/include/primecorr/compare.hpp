// compare.hpp
//
// Binds the empirical twin/Goldbach sums to their predicted main terms and
// packages the result as a report: ratio, correction factor kappa, and the
// three labeled diagnostic error-budget terms (unit implied constants, never
// asserted).

#pragma once

#include <chrono>
#include <string>

#include "primecorr/correlations.hpp"
#include "primecorr/singular.hpp"
#include "primecorr/variance.hpp"

namespace primecorr {

struct corr_report {
  std::string command;
  double X_or_h = 0.0;
  i64 h = 0;
  i64 d = 0;          // 0 when no character was supplied
  double u = 0.0;     // 0 when not applicable
  double z = 0.0;
  double empirical = 0.0;
  double predicted = 0.0;
  double kappa = 1.0;
  double ratio = 0.0;
  bool degenerate = false;  // predicted == 0
  double err_budget[3] = {0.0, 0.0, 0.0};
  double budget_C = 1.0;    // constants the budget terms were evaluated at
  double budget_eps = 0.1;
  double runtime_ms = 0.0;
};

namespace detail {

// Proof-motivated default u = min(sqrt(V log eta)/(10 C), log eta), clamped
// to the u >= 2 precondition; a convenience only.
inline double default_u(double V, double eta, double C) {
  double logeta = std::max(std::log(eta), 0.0);
  double u = std::min(std::sqrt(V * logeta) / (10.0 * C), logeta);
  return std::max(u, 2.0);
}

inline void fill_budget(corr_report& r, double V, double eta, double C,
                        double eps, double logX) {
  double logeta = std::log(eta);
  r.err_budget[0] = std::exp(-C * std::sqrt(V * std::max(logeta, 0.0)));
  r.err_budget[1] = std::exp(-C * std::pow(logX, 0.6 - eps));
  r.err_budget[2] = V * std::pow(logeta, 6) / eta;
  r.budget_C = C;
  r.budget_eps = eps;
}

}  // namespace detail

inline corr_report compare_twin(u64 X, i64 h, const quad_char* chi = nullptr,
                                double u_in = 0.0, unsigned threads = 1,
                                double C = 1.0, double eps = 0.1) {
  auto t0 = std::chrono::steady_clock::now();
  corr_report r;
  r.command = "twin";
  r.X_or_h = static_cast<double>(X);
  r.h = h;
  r.empirical = twin_correlation(X, h, threads);
  r.predicted = predicted_main(pair_kind::twin, static_cast<double>(X), h, chi);
  r.kappa = (chi && h % 2 == 0) ? correction_factor(h, *chi, pair_kind::twin).kappa
                                : 1.0;
  if (chi) {
    r.d = chi->disc;
    double V = std::log(static_cast<double>(X)) /
               std::log(static_cast<double>(chi->q));
    double target = std::max(1e-6, static_cast<double>(chi->q) / 5e8);
    double eta = l_one(*chi, target).eta;
    r.u = (u_in > 0.0) ? u_in : detail::default_u(V, eta, C);
    r.z = std::pow(static_cast<double>(X), 1.0 / r.u);
    detail::fill_budget(r, V, eta, C, eps, std::log(static_cast<double>(X)));
  } else if (u_in > 0.0) {
    r.u = u_in;
    r.z = std::pow(static_cast<double>(X), 1.0 / r.u);
  }
  r.degenerate = (r.predicted == 0.0);
  r.ratio = r.degenerate ? 0.0 : r.empirical / r.predicted;
  r.runtime_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

inline corr_report compare_goldbach(u64 h, const quad_char* chi = nullptr,
                                    double u_in = 0.0, unsigned threads = 1,
                                    double C = 1.0, double eps = 0.1) {
  auto t0 = std::chrono::steady_clock::now();
  corr_report r;
  r.command = "goldbach";
  r.X_or_h = static_cast<double>(h);
  r.h = static_cast<i64>(h);
  r.empirical = goldbach_sum(h, threads);
  r.predicted = predicted_main(pair_kind::goldbach, static_cast<double>(h),
                               static_cast<i64>(h), chi);
  r.kappa = (chi && h % 2 == 0)
                ? correction_factor(static_cast<i64>(h), *chi, pair_kind::goldbach)
                      .kappa
                : 1.0;
  if (chi) {
    r.d = chi->disc;
    double V = std::log(static_cast<double>(h)) /
               std::log(static_cast<double>(chi->q));
    double target = std::max(1e-6, static_cast<double>(chi->q) / 5e8);
    double eta = l_one(*chi, target).eta;
    r.u = (u_in > 0.0) ? u_in : detail::default_u(V, eta, C);
    r.z = std::pow(static_cast<double>(h), 1.0 / r.u);
    detail::fill_budget(r, V, eta, C, eps, std::log(static_cast<double>(h)));
  } else if (u_in > 0.0) {
    r.u = u_in;
    r.z = std::pow(static_cast<double>(h), 1.0 / r.u);
  }
  r.degenerate = (r.predicted == 0.0);
  r.ratio = r.degenerate ? 0.0 : r.empirical / r.predicted;
  r.runtime_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

}  // namespace primecorr
