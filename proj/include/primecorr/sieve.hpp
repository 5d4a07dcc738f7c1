// sieve.hpp
//
// Upper-bound combinatorial sieve weights lambda_d = mu(d) restricted to
// descending prime chains p_1 > ... > p_r below z whose odd-length prefixes
// satisfy p_1...p_m * p_m^beta < D (strict; ties excluded).  The weight map
// is lazy: membership is decided per query, and the operations that need the
// whole support enumerate it under a budget guard.  Chain products are
// compared against the real parameter D in exact integer arithmetic.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "primecorr/arith.hpp"
#include "primecorr/common.hpp"

namespace primecorr {

inline constexpr u64 k_sieve_support_budget = 10'000'000;

namespace detail {

// Exact strict comparison of an integer chain product against real D.
inline bool product_below(i128 t, double D) {
  if (!(D > 0)) return false;
  if (D >= 1.7e38) return true;
  i128 floor_d = static_cast<i128>(D);
  if (static_cast<double>(floor_d) == D) return t < floor_d;
  return t <= floor_d;
}

}  // namespace detail

struct sieve_weights {
  double z = 3.0;
  double D = 9.0;
  int beta = 2;
  int A = 2;
  std::vector<u32> primes;        // ascending, p < z
  std::vector<double> z_ladder;   // z_r = z^{((beta-1)/beta)^r}, decreasing

  double s() const { return std::log(D) / std::log(z); }

  // Chain condition for d given its prime factors in descending order.
  bool chain_in_support(const std::vector<u64>& desc) const {
    i128 prod = 1;
    for (std::size_t m = 1; m <= desc.size(); ++m) {
      u64 p = desc[m - 1];
      prod *= p;
      if (m % 2 == 1) {
        i128 t = prod;
        bool ok = true;
        for (int j = 0; j < beta; ++j) {
          t *= p;
          if (!detail::product_below(t, D)) {
            ok = false;
            break;
          }
        }
        if (!ok || !detail::product_below(t, D)) return false;
      }
    }
    return true;
  }

  // lambda_d for squarefree d | P(z) given descending prime factors.
  int lambda(const std::vector<u64>& desc) const {
    if (!chain_in_support(desc)) return 0;
    return (desc.size() % 2 == 0) ? 1 : -1;
  }
};

inline sieve_weights generate_weights(double z, double D, int beta, int A) {
  if (!(z > 2.0)) throw validation_error("generate_weights: need z > 2");
  if (!(D > 1.0)) throw validation_error("generate_weights: need D > 1");
  if (D > 1e30) throw budget_error("generate_weights: D above 1e30 budget");
  if (beta < 1) throw validation_error("generate_weights: need beta >= 1");
  if (A < 1) throw validation_error("generate_weights: need A >= 1");
  sieve_weights w;
  w.z = z;
  w.D = D;
  w.beta = beta;
  w.A = A;
  if (z > 1e6) throw budget_error("generate_weights: z above 1e6 budget");
  auto primes = base_primes(static_cast<u64>(std::ceil(z)));
  for (u32 p : *primes)
    if (static_cast<double>(p) < z) w.primes.push_back(p);
  double ratio = static_cast<double>(beta - 1) / static_cast<double>(beta);
  double exponent = 1.0;
  for (int r = 0; r < 256; ++r) {
    double zr = std::pow(z, exponent);
    w.z_ladder.push_back(zr);
    if (zr < 1.01) break;
    exponent *= ratio;
  }
  return w;
}

namespace detail {

// Depth-first walk of the support chains (descending primes).  The visitor
// receives (product, depth parity sign mu, bitmask over prime indices).
// Returns false from the visitor to abort.
template <class Visitor>
inline u64 walk_support(const sieve_weights& w, u64 node_budget, Visitor&& visit) {
  const auto& ps = w.primes;
  const std::size_t np = ps.size();
  struct frame {
    std::size_t next_idx;  // next candidate position in descending order
    i128 prod;
    int depth;
    u64 mask;
  };
  u64 visited = 0;
  std::vector<frame> stack;
  stack.push_back(frame{0, 1, 0, 0});
  while (!stack.empty()) {
    frame f = stack.back();
    stack.pop_back();
    if (++visited > node_budget)
      throw budget_error("sieve support enumeration exceeds budget " +
                         std::to_string(node_budget) + " chains");
    if (!visit(f.prod, f.depth, f.mask)) return visited;
    // descending order: index i counts from the largest prime
    for (std::size_t i = f.next_idx; i < np; ++i) {
      u32 p = ps[np - 1 - i];
      i128 prod = f.prod * p;
      if ((f.depth + 1) % 2 == 1) {
        i128 t = prod;
        bool ok = true;
        for (int j = 0; j < w.beta; ++j) {
          t *= p;
          if (!product_below(t, w.D)) {
            ok = false;
            break;
          }
        }
        if (!ok || !product_below(t, w.D)) continue;
      }
      stack.push_back(frame{i + 1, prod, f.depth + 1,
                            f.mask | (np <= 64 ? (u64(1) << (np - 1 - i)) : 0)});
    }
  }
  return visited;
}

}  // namespace detail

struct support_entry {
  double d;     // chain product (exact for d < 2^53)
  int mu;       // (-1)^r
  u64 mask;     // bitmask over w.primes (valid when primes.size() <= 64)
};

inline std::vector<support_entry> enumerate_support(
    const sieve_weights& w, u64 guard = k_sieve_support_budget) {
  std::vector<support_entry> out;
  detail::walk_support(w, guard, [&](i128 prod, int depth, u64 mask) {
    out.push_back(support_entry{static_cast<double>(prod),
                                (depth % 2 == 0) ? 1 : -1, mask});
    return true;
  });
  return out;
}

inline u64 support_size(const sieve_weights& w,
                        u64 guard = k_sieve_support_budget) {
  u64 count = 0;
  detail::walk_support(w, guard, [&](i128, int, u64) {
    ++count;
    return true;
  });
  return count;
}

// sum_{d | (n, P_v(z))} lambda_d, exact integer.  Primes dividing v are
// exempt from the sieve.
inline i64 sieve_sum_at(u64 n, const sieve_weights& w, u64 excluded_v = 1) {
  if (n < 1) throw validation_error("sieve_sum_at: need n >= 1");
  std::vector<u64> ps;
  for (auto [p, e] : factorize(n)) {
    if (static_cast<double>(p) < w.z && excluded_v % p != 0) ps.push_back(p);
  }
  // descending
  std::sort(ps.rbegin(), ps.rend());
  i64 total = 0;
  // DFS restricted to the primes of n
  std::function<void(std::size_t, i128, int)> dfs = [&](std::size_t idx,
                                                        i128 prod, int depth) {
    total += (depth % 2 == 0) ? 1 : -1;
    for (std::size_t i = idx; i < ps.size(); ++i) {
      u64 p = ps[i];
      i128 np = prod * p;
      if ((depth + 1) % 2 == 1) {
        i128 t = np;
        bool ok = true;
        for (int j = 0; j < w.beta; ++j) {
          t *= p;
          if (!detail::product_below(t, w.D)) {
            ok = false;
            break;
          }
        }
        if (!ok || !detail::product_below(t, w.D)) continue;
      }
      dfs(i + 1, np, depth + 1);
    }
  };
  dfs(0, 1, 0);
  return total;
}

struct lemma_pair {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

// sum_{d | P(z)} lambda_d g(d) against prod_{p < z} (1 - g(p)) for a
// multiplicative g with |g(p)| <= 2/p.
inline lemma_pair fundamental_sum(const sieve_weights& w,
                                  const std::function<double(u32)>& g,
                                  u64 guard = k_sieve_support_budget) {
  std::vector<double> gp(w.primes.size());
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    gp[i] = g(w.primes[i]);
    if (std::abs(gp[i]) > 2.0 / static_cast<double>(w.primes[i]) + 1e-12)
      throw validation_error("fundamental_sum: |g(p)| <= 2/p violated at p = " +
                             std::to_string(w.primes[i]));
  }
  // DFS carrying the product of g over chain primes
  const auto& ps = w.primes;
  const std::size_t np = ps.size();
  struct frame {
    std::size_t next_idx;
    i128 prod;
    int depth;
    double gval;
  };
  kahan acc;
  u64 visited = 0;
  std::vector<frame> stack;
  stack.push_back(frame{0, 1, 0, 1.0});
  while (!stack.empty()) {
    frame f = stack.back();
    stack.pop_back();
    if (++visited > guard)
      throw budget_error("fundamental_sum: support enumeration exceeds budget " +
                         std::to_string(guard) + " chains");
    acc.add((f.depth % 2 == 0 ? 1.0 : -1.0) * f.gval);
    for (std::size_t i = f.next_idx; i < np; ++i) {
      std::size_t pi = np - 1 - i;
      u32 p = ps[pi];
      i128 prod = f.prod * p;
      if ((f.depth + 1) % 2 == 1) {
        i128 t = prod;
        bool ok = true;
        for (int j = 0; j < w.beta; ++j) {
          t *= p;
          if (!detail::product_below(t, w.D)) {
            ok = false;
            break;
          }
        }
        if (!ok || !detail::product_below(t, w.D)) continue;
      }
      stack.push_back(frame{i + 1, prod, f.depth + 1, f.gval * gp[pi]});
    }
  }
  lemma_pair out;
  out.lhs = acc.total();
  double rhs = 1.0;
  for (std::size_t i = 0; i < np; ++i) rhs *= 1.0 - gp[i];
  out.rhs = rhs;
  out.rel_err = (rhs != 0.0) ? std::abs(out.lhs - rhs) / std::abs(rhs)
                             : std::abs(out.lhs);
  return out;
}

// Double sum over support pairs with (d2, d1 v) = 1 and (d1 d2, q) = 1,
// against the product form with the phi factor.
inline lemma_pair combined_sieve_sum(const sieve_weights& w, u64 v, u64 q,
                                     u64 guard = k_sieve_support_budget) {
  if (v < 1 || q < 1) throw validation_error("combined_sieve_sum: need v, q >= 1");
  if (w.primes.size() > 64)
    throw budget_error("combined_sieve_sum: more than 64 primes below z");
  auto support = enumerate_support(w, guard);
  if (support.size() > 40'000)
    throw budget_error("combined_sieve_sum: support too large for pair sum");
  u64 vmask = 0, qmask = 0;
  for (std::size_t i = 0; i < w.primes.size(); ++i) {
    if (v % w.primes[i] == 0) vmask |= u64(1) << i;
    if (q % w.primes[i] == 0) qmask |= u64(1) << i;
  }
  kahan acc;
  for (const auto& e1 : support) {
    if (e1.mask & qmask) continue;
    double base = static_cast<double>(e1.mu) / e1.d;
    u64 bad = e1.mask | vmask | qmask;
    for (const auto& e2 : support) {
      if (e2.mask & bad) continue;
      acc.add(base * static_cast<double>(e2.mu) / e2.d);
    }
  }
  lemma_pair out;
  out.lhs = acc.total();
  double rhs = 1.0;
  for (u32 p : w.primes) {
    if (q % p != 0) rhs *= 1.0 - 1.0 / static_cast<double>(p);
  }
  for (u32 p : w.primes) {
    if (q % p != 0 && v % p != 0)
      rhs *= 1.0 - 1.0 / static_cast<double>(p - 1);
  }
  out.rhs = rhs;
  out.rel_err = (rhs != 0.0) ? std::abs(out.lhs - rhs) / std::abs(rhs)
                             : std::abs(out.lhs);
  return out;
}

struct broken_chain_stats {
  i64 total = 0;       // sum over odd r of S_r(n)
  bool ladder_ok = true;  // every failing chain had p_r >= z_r
};

// Exact enumeration of the inclusion-exclusion remainder: descending chains
// over the primes of n (v-exempt primes stripped first) that satisfy the
// support condition at odd depths below r and fail it first at odd depth r,
// with the cofactor free of primes below p_r.
inline broken_chain_stats broken_chains_at(u64 n, const sieve_weights& w,
                                           u64 excluded_v = 1) {
  broken_chain_stats st;
  u64 m = n;
  for (auto [p, e] : factorize(excluded_v)) {
    while (m % p == 0) m /= p;
  }
  auto fac = factorize(m);
  std::vector<u64> ps;  // distinct primes of m below z, descending
  for (auto [p, e] : fac)
    if (static_cast<double>(p) < w.z) ps.push_back(p);
  std::sort(ps.rbegin(), ps.rend());
  double s_val = w.s();
  bool check_ladder = s_val >= static_cast<double>(w.beta);

  std::function<void(std::size_t, i128, int)> dfs = [&](std::size_t idx,
                                                        i128 prod, int depth) {
    for (std::size_t i = idx; i < ps.size(); ++i) {
      u64 p = ps[i];
      i128 np = prod * p;
      int r = depth + 1;
      bool holds = true;
      if (r % 2 == 1) {
        i128 t = np;
        for (int j = 0; j < w.beta; ++j) {
          t *= p;
          if (!detail::product_below(t, w.D)) {
            holds = false;
            break;
          }
        }
        if (holds && !detail::product_below(t, w.D)) holds = false;
      }
      if (!holds) {
        // First failure at odd depth r.  The cofactor n/(p_1...p_r) must have
        // no prime below p_r; chain primes all lie at or above p_r, so this
        // is exactly "m has no prime factor below p_r".
        bool cofactor_ok = true;
        for (auto [pp, ee] : fac) {
          if (pp < p) {
            cofactor_ok = false;
            break;
          }
        }
        if (cofactor_ok) {
          st.total += 1;
          if (check_ladder && static_cast<std::size_t>(r) < w.z_ladder.size() &&
              static_cast<double>(p) < w.z_ladder[r])
            st.ladder_ok = false;
        }
        continue;
      }
      dfs(i + 1, np, r);
    }
  };
  dfs(0, 1, 0);
  return st;
}

}  // namespace primecorr
