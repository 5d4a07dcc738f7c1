// variance.hpp
//
// Exact short-interval variance int_X^{2X} (sum_{y<n<=y+H} Lambda(n) - H)^2 dy
// by an event sweep: with integer X and H the window count is constant on
// each unit interval [t, t+1) and changes by Lambda(t+H) - Lambda(t) at
// integer t, so the integral is a finite sum of run-length pieces in closed
// form.

#pragma once

#include <algorithm>
#include <vector>

#include "primecorr/arith.hpp"
#include "primecorr/common.hpp"

namespace primecorr {

inline double short_interval_variance(u64 X, u64 H, unsigned threads = 1) {
  if (X < 2) throw validation_error("short_interval_variance: need X >= 2");
  if (H < 1) throw validation_error("short_interval_variance: need H >= 1");
  if (X > k_correlation_budget || H > X)
    throw budget_error("short_interval_variance: X <= 1e8 and H <= X budget");

  struct event {
    u64 pos;      // integer t at which the window count changes
    double delta; // Lambda added (entering) or removed (leaving)
  };
  // Prime powers n in (X, 2X+H]; per-chunk gathering keeps event order fixed.
  const u64 chunk = u64(1) << 20;
  u64 first = X + 1, last = 2 * X + H;
  u64 tasks = (last - first) / chunk + 1;
  std::vector<std::vector<event>> chunk_events(tasks);
  std::vector<double> chunk_w0(tasks, 0.0);
  parallel_for(tasks, threads, [&](u64 t) {
    u64 lo = first + t * chunk;
    u64 hi = std::min(last + 1, lo + chunk);
    arith_segment seg = build_segment(lo, hi);
    auto& ev = chunk_events[t];
    kahan w0;
    for (u64 n = lo; n < hi; ++n) {
      double v = seg.vm_at(n);
      if (v == 0.0) continue;
      if (n <= X + H) w0.add(v);  // initial window (X, X+H]
      if (n >= X + 1 && n <= 2 * X - 1) ev.push_back(event{n, -v});
      if (n >= X + 1 + H && n <= 2 * X - 1 + H)
        ev.push_back(event{n - H, +v});
    }
    chunk_w0[t] = w0.total();
  });

  std::vector<event> events;
  for (auto& ce : chunk_events) {
    events.insert(events.end(), ce.begin(), ce.end());
    ce.clear();
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const event& a, const event& b) { return a.pos < b.pos; });

  kahan w;
  for (double p : chunk_w0) w.add(p);
  kahan total;
  double Hd = static_cast<double>(H);
  u64 t = X;
  std::size_t i = 0;
  while (i < events.size()) {
    u64 pos = events[i].pos;
    double dev = w.total() - Hd;
    total.add(dev * dev * static_cast<double>(pos - t));
    while (i < events.size() && events[i].pos == pos) {
      w.add(events[i].delta);
      ++i;
    }
    t = pos;
  }
  double dev = w.total() - Hd;
  total.add(dev * dev * static_cast<double>(2 * X - t));
  return total.total();
}

}  // namespace primecorr
