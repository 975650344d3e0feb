#pragma once

#include <algorithm>
#include <compare>
#include <ostream>
#include <string>
#include <vector>

#include "natdens/nat.hpp"
#include "natdens/rational.hpp"

namespace natdens {

/// Closed interval [a, b] of naturals, 1 <= a <= b.
class interval {
 public:
  interval(nat a, nat b) : a_(a), b_(b) {
    if (a == 0) throw error("interval left endpoint must be >= 1");
    if (a > b) throw error("interval [" + std::to_string(a) + "," + std::to_string(b) + "] has a > b");
  }

  nat a() const { return a_; }
  nat b() const { return b_; }
  nat size() const { return b_ - a_ + 1; }

  bool contains(nat n) const { return a_ <= n && n <= b_; }
  bool contains(const interval& o) const { return a_ <= o.a_ && o.b_ <= b_; }
  bool intersects(const interval& o) const { return a_ <= o.b_ && o.a_ <= b_; }

  std::string str() const { return "[" + std::to_string(a_) + "," + std::to_string(b_) + "]"; }

  friend bool operator==(const interval&, const interval&) = default;
  friend auto operator<=>(const interval&, const interval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const interval& I) { return os << I.str(); }

 private:
  nat a_;
  nat b_;
};

/// mu([a,b]) = b/a.
inline rational mu(const interval& I) {
  return rational(static_cast<rational::wide>(I.b()), static_cast<rational::wide>(I.a()));
}

enum class interval_kind { m_interval, plus_m, neither };

inline const char* to_string(interval_kind k) {
  switch (k) {
    case interval_kind::m_interval: return "m-interval";
    case interval_kind::plus_m: return "+m-interval";
    case interval_kind::neither: return "neither";
  }
  return "?";
}

struct classification {
  interval_kind label;
  bool is_m_interval;
  bool is_plus_m;
};

inline void require_ratio_above_one(const rational& m, const char* what = "m") {
  if (m <= rational(1)) throw error(std::string(what) + " must be > 1, got " + m.str());
}

/// m*a - 1 < b <= m*a holds exactly when b == floor(m*a).
inline bool is_m_interval(const interval& I, const rational& m) {
  return m.floor_times(I.a()) == static_cast<rational::wide>(I.b());
}

inline bool is_plus_m_interval(const interval& I, const rational& m) { return mu(I) > m; }

inline classification classify(const interval& I, const rational& m) {
  require_ratio_above_one(m);
  const bool in_m = is_m_interval(I, m);
  const bool plus = is_plus_m_interval(I, m);
  interval_kind label = in_m ? interval_kind::m_interval : plus ? interval_kind::plus_m : interval_kind::neither;
  return {label, in_m, plus};
}

/// The unique m-interval with left endpoint a: [a, floor(m*a)].
inline interval m_interval_at(nat a, const rational& m) {
  require_ratio_above_one(m);
  require_positive(a, "left endpoint");
  const rational::wide b = m.floor_times(a);
  if (b > static_cast<rational::wide>(std::numeric_limits<nat>::max())) {
    throw overflow_error("m-interval at " + std::to_string(a) + " for m=" + m.str());
  }
  return interval(a, static_cast<nat>(b));
}

/// Consecutive m-intervals starting at lo until one reaches hi. The last one
/// may end past hi; it is never clipped.
inline std::vector<interval> tile_m_intervals(nat lo, nat hi, const rational& m) {
  if (lo > hi) throw error("tile_m_intervals requires lo <= hi");
  std::vector<interval> tiles;
  nat start = lo;
  for (;;) {
    interval J = m_interval_at(start, m);
    tiles.push_back(J);
    if (J.b() >= hi) break;
    start = J.b() + 1;
  }
  return tiles;
}

/// Sorted, pairwise disjoint, non-adjacent intervals.
class interval_union {
 public:
  interval_union() = default;
  explicit interval_union(std::vector<interval> parts) {
    for (const auto& p : parts) add(p);
  }

  void add(const interval& I) {
    auto it = std::lower_bound(parts_.begin(), parts_.end(), I.a(),
                               [](const interval& p, nat a) { return p.b() < a - 1; });
    nat lo = I.a();
    nat hi = I.b();
    auto first = it;
    while (it != parts_.end() && it->a() - 1 <= hi) {
      lo = std::min(lo, it->a());
      hi = std::max(hi, it->b());
      ++it;
    }
    it = parts_.erase(first, it);
    parts_.insert(it, interval(lo, hi));
  }

  const std::vector<interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  nat size() const {
    nat total = 0;
    for (const auto& p : parts_) total += p.size();
    return total;
  }

  bool contains(nat n) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), n, [](nat x, const interval& p) { return x < p.a(); });
    return it != parts_.begin() && std::prev(it)->contains(n);
  }

  /// Number of members in [1, n].
  nat count_leq(nat n) const {
    nat total = 0;
    for (const auto& p : parts_) {
      if (p.a() > n) break;
      total += std::min(p.b(), n) - p.a() + 1;
    }
    return total;
  }

  /// Number of members inside I.
  nat overlap(const interval& I) const {
    nat total = 0;
    for (const auto& p : parts_) {
      if (p.a() > I.b()) break;
      if (!p.intersects(I)) continue;
      total += std::min(p.b(), I.b()) - std::max(p.a(), I.a()) + 1;
    }
    return total;
  }

  std::string str() const {
    std::string s;
    for (const auto& p : parts_) {
      if (!s.empty()) s += " u ";
      s += p.str();
    }
    return s.empty() ? "{}" : s;
  }

  friend bool operator==(const interval_union&, const interval_union&) = default;

 private:
  std::vector<interval> parts_;
};

}  // namespace natdens
