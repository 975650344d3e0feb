#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "natdens/interval.hpp"
#include "natdens/natset.hpp"
#include "natdens/rational.hpp"

namespace natdens {

/// ||S_n|| / n, exactly.
inline rational prefix_density(const nat_set& S, nat n) {
  require_positive(n, "n");
  return rational(static_cast<rational::wide>(S.count_leq(n)), static_cast<rational::wide>(n));
}

/// ||S intersect I|| / ||I||, exactly.
inline rational interval_density(const nat_set& S, const interval& I) {
  return rational(static_cast<rational::wide>(S.count_in(I)), static_cast<rational::wide>(I.size()));
}

struct density_sample {
  nat n;
  rational density;
};

struct density_profile {
  std::vector<density_sample> samples;
  nat tail_start = 0;  // samples with n >= tail_start feed the estimates
  rational limsup_est;
  rational liminf_est;
};

/// Sample points for estimate_limits: `grid` geometrically spaced n in
/// [1, n_max], plus floor(c * 2^j) and floor(c * 2^j) - 1 for c in {1, 3/2}.
/// The dyadic points are where block-structured sets reach their extremes.
inline std::vector<nat> limit_sample_points(nat n_max, nat grid) {
  std::set<nat> pts;
  const double log_max = std::log(static_cast<double>(n_max));
  for (nat t = 0; t < grid; ++t) {
    const double x = std::exp(log_max * static_cast<double>(t) / static_cast<double>(grid - 1));
    nat n = static_cast<nat>(std::llround(x));
    pts.insert(std::clamp<nat>(n, 1, n_max));
  }
  for (unsigned j = 0; j < 63; ++j) {
    const nat p = pow2(j);
    if (p > n_max) break;
    for (nat v : {p, p + p / 2}) {
      if (v <= n_max) pts.insert(v);
      if (v > 1 && v - 1 <= n_max) pts.insert(v - 1);
    }
  }
  pts.insert(n_max);
  return {pts.begin(), pts.end()};
}

/// Tail max/min of prefix densities over a sample grid. An estimator, not a
/// proof that the limits exist or take these values.
inline density_profile estimate_limits(const nat_set& S, nat n_max, const rational& tail_fraction, nat grid) {
  if (n_max < 16) throw error("estimate_limits needs n_max >= 16");
  if (tail_fraction <= rational(0) || tail_fraction >= rational(1)) throw error("tail fraction must lie in (0,1)");
  if (grid < 8) throw error("estimate_limits needs grid >= 8");

  density_profile out;
  out.tail_start = static_cast<nat>(tail_fraction.ceil_times(n_max));
  bool seen = false;
  for (nat n : limit_sample_points(n_max, grid)) {
    rational d = prefix_density(S, n);
    out.samples.push_back({n, d});
    if (n < out.tail_start) continue;
    if (!seen) {
      out.limsup_est = out.liminf_est = d;
      seen = true;
    } else {
      out.limsup_est = std::max(out.limsup_est, d);
      out.liminf_est = std::min(out.liminf_est, d);
    }
  }
  return out;
}

struct thm1_constants_t {
  rational eps_prime_bound;     // (m-1)/(m+1) * epsilon
  rational m_min_for_converse;  // 3 / epsilon
};

/// Constants used by the two directions of the interval characterization:
/// any 0 < eps' < eps_prime_bound works for the forward direction; the
/// converse takes eps' < eps/3 and intervals of ratio above 3/eps.
inline thm1_constants_t thm1_constants(const rational& epsilon, const rational& m) {
  require_ratio_above_one(m);
  if (epsilon <= rational(0)) throw error("epsilon must be > 0");
  return {(m - rational(1)) / (m + rational(1)) * epsilon, rational(3) / epsilon};
}

enum class scan_mode { automatic, exhaustive, sampled };

inline const char* to_string(scan_mode m) {
  switch (m) {
    case scan_mode::automatic: return "automatic";
    case scan_mode::exhaustive: return "exhaustive";
    case scan_mode::sampled: return "sampled";
  }
  return "?";
}

struct thm1_report {
  rational D;
  rational m;
  rational epsilon;
  nat N = 0;
  nat scan_limit = 0;
  scan_mode mode = scan_mode::exhaustive;
  nat intervals_checked = 0;
  interval worst_interval{1, 1};
  rational worst_density;
  rational worst_deviation;
  bool pass = false;
};

namespace detail {

// Deviation |c/L - D| kept as an unreduced fraction so the hot loop avoids gcds.
struct deviation {
  rational::wide num = -1;
  rational::wide den = 1;
  nat a = 0;
  nat b = 0;

  bool better_than(const deviation& o) const {
    const rational::wide lhs = num * o.den;
    const rational::wide rhs = o.num * den;
    if (lhs != rhs) return lhs > rhs;
    return std::pair(a, b) < std::pair(o.a, o.b);
  }
};

struct thm1_scan {
  const std::vector<nat>& prefix;
  rational D;
  rational m;
  nat scan_limit;
  bool exhaustive;

  void visit(nat a, nat b, deviation& best, nat& checked) const {
    const rational::wide len = static_cast<rational::wide>(b - a + 1);
    const rational::wide c = static_cast<rational::wide>(prefix[b] - prefix[a - 1]);
    rational::wide num = c * D.den() - rational::wide{D.num()} * len;
    if (num < 0) num = -num;
    deviation d{num, len * D.den(), a, b};
    ++checked;
    if (d.better_than(best)) best = d;
  }

  void run(const std::vector<nat>& as, std::size_t lo, std::size_t hi, deviation& best, nat& checked) const {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const nat a = as[idx];
      const rational::wide first_b = m.floor_times(a) + 1;
      if (first_b > static_cast<rational::wide>(scan_limit)) continue;
      const nat b0 = static_cast<nat>(first_b);
      if (exhaustive) {
        for (nat b = b0; b <= scan_limit; ++b) visit(a, b, best, checked);
        continue;
      }
      nat b = b0;
      for (;;) {
        visit(a, b, best, checked);
        if (b == scan_limit) break;
        const nat next = std::max<nat>(b + 1, static_cast<nat>(rational::of(21, 20).ceil_times(b)));
        b = std::min(next, scan_limit);
      }
    }
  }
};

}  // namespace detail

/// Scans +m-intervals [a,b] with N < a <= b <= scan_limit and records the
/// worst |density of S in [a,b] - D|. Exhaustive scans every such interval;
/// sampled takes a on a ratio-1.05 grid and, per a, b from the smallest +m
/// endpoint upward on a ratio-1.05 grid ending at scan_limit. `automatic`
/// is exhaustive when scan_limit <= 4096.
inline thm1_report check_thm1(const nat_set& S, const rational& D, const rational& m, const rational& epsilon, nat N,
                              nat scan_limit, scan_mode mode = scan_mode::automatic, unsigned threads = 1) {
  require_ratio_above_one(m);
  if (epsilon <= rational(0) || epsilon >= rational(1)) throw error("epsilon must lie in (0,1)");
  if (D < rational(0) || D > rational(1)) throw error("D must lie in [0,1]");
  if (N >= scan_limit) throw error("empty scan range: N must be < scan_limit");
  if (mode == scan_mode::automatic) mode = scan_limit <= 4096 ? scan_mode::exhaustive : scan_mode::sampled;

  std::vector<nat> prefix(scan_limit + 1, 0);
  for (nat n = 1; n <= scan_limit; ++n) prefix[n] = prefix[n - 1] + (S.contains(n) ? 1 : 0);

  std::vector<nat> as;
  if (mode == scan_mode::exhaustive) {
    for (nat a = N + 1; a <= scan_limit; ++a) as.push_back(a);
  } else {
    for (nat a = N + 1; a <= scan_limit;) {
      as.push_back(a);
      a = std::max<nat>(a + 1, static_cast<nat>(rational::of(21, 20).ceil_times(a)));
    }
  }

  detail::thm1_scan scan{prefix, D, m, scan_limit, mode == scan_mode::exhaustive};
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(as.size())));
  std::vector<detail::deviation> best(threads);
  std::vector<nat> checked(threads, 0);
  if (threads == 1) {
    scan.run(as, 0, as.size(), best[0], checked[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (as.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(as.size(), t * chunk);
      const std::size_t hi = std::min(as.size(), lo + chunk);
      pool.emplace_back([&, t, lo, hi] { scan.run(as, lo, hi, best[t], checked[t]); });
    }
    for (auto& th : pool) th.join();
  }

  detail::deviation worst;
  thm1_report rep;
  for (unsigned t = 0; t < threads; ++t) {
    rep.intervals_checked += checked[t];
    if (checked[t] != 0 && (worst.num < 0 || best[t].better_than(worst))) worst = best[t];
  }
  if (rep.intervals_checked == 0) {
    throw error("empty scan range: no +m-interval with a > N ends at or below scan_limit");
  }

  rep.D = D;
  rep.m = m;
  rep.epsilon = epsilon;
  rep.N = N;
  rep.scan_limit = scan_limit;
  rep.mode = mode;
  rep.worst_interval = interval(worst.a, worst.b);
  rep.worst_deviation = rational(worst.num, worst.den);
  rep.worst_density = rational(static_cast<rational::wide>(prefix[worst.b] - prefix[worst.a - 1]),
                               static_cast<rational::wide>(worst.b - worst.a + 1));
  rep.pass = rep.worst_deviation < epsilon;
  return rep;
}

}  // namespace natdens
