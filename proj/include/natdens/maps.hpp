#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natdens/interval.hpp"
#include "natdens/nat.hpp"
#include "natdens/natset.hpp"

namespace natdens {

/// A 1-1 function N -> N. Only apply() is mandatory; the rest are fast paths
/// or bounds that a map may declare.
class map1to1 {
 public:
  virtual ~map1to1() = default;

  virtual nat apply(nat n) const = 0;

  virtual std::optional<nat> inverse(nat) const { return std::nullopt; }

  /// {n : apply(n) in I} as an interval union, when the map has structure for it.
  virtual std::optional<interval_union> preimage_of_interval(const interval&) const { return std::nullopt; }

  /// Largest domain point whose image can be <= x, when the map declares one.
  virtual std::optional<nat> reach_bound(nat) const { return std::nullopt; }

  virtual std::string name() const = 0;
};

using map_ptr = std::shared_ptr<const map1to1>;

namespace detail {

// Last element of the dyadic block holding x; 1..3 form the fixed block [1,3].
inline nat block_end(nat x) {
  if (x <= 3) return 3;
  const unsigned i = floor_log2(x);
  if (i == 63) return std::numeric_limits<nat>::max();
  return pow2(i + 1) - 1;
}

}  // namespace detail

/// The 2^n shuffle. Fixes 1..3 and permutes each block [2^i, 2^(i+1)-1],
/// i >= 2: the lower half spreads onto the evens, the upper half onto the odds.
inline nat sh(nat k) {
  require_positive(k, "k");
  if (k < 4) return k;
  const unsigned i = floor_log2(k);
  const nat base = pow2(i);
  const nat half = pow2(i - 1);
  if (k < base + half) return base + 2 * (k - base);
  return base + 2 * (k - base - half) + 1;
}

inline nat sh_inv(nat k) {
  require_positive(k, "k");
  if (k < 4) return k;
  const unsigned i = floor_log2(k);
  const nat base = pow2(i);
  const nat j = (k - base) / 2;
  return k % 2 == 0 ? base + j : base + pow2(i - 1) + j;
}

/// {k : sh(k) in I}. Within a block the evens of I pull back to one interval
/// in the lower half and the odds to one in the upper half, so the result has
/// at most three parts.
inline interval_union sh_preimage_interval(const interval& I) {
  interval_union out;
  nat x = I.a();
  for (;;) {
    const nat end = std::min(I.b(), detail::block_end(x));
    if (end <= 3) {
      out.add(interval(x, end));
    } else {
      const unsigned i = floor_log2(x);
      const nat base = pow2(i);
      const nat half = pow2(i - 1);
      if (x == base && end == detail::block_end(x)) {
        out.add(interval(x, end));
      } else {
        // offsets u = 2j pull back to base + j, u = 2j + 1 to base + half + j
        const nat ulo = x - base;
        const nat uhi = end - base;
        if ((ulo + 1) / 2 <= uhi / 2) out.add(interval(base + (ulo + 1) / 2, base + uhi / 2));
        if (uhi >= 1 && ulo / 2 <= (uhi - 1) / 2) out.add(interval(base + half + ulo / 2, base + half + (uhi - 1) / 2));
      }
    }
    if (end == I.b()) break;
    x = end + 1;
  }
  return out;
}

class shuffle_map final : public map1to1 {
 public:
  nat apply(nat n) const override { return sh(n); }
  std::optional<nat> inverse(nat n) const override { return sh_inv(n); }
  std::optional<interval_union> preimage_of_interval(const interval& I) const override {
    return sh_preimage_interval(I);
  }
  std::optional<nat> reach_bound(nat x) const override { return detail::block_end(x); }
  std::string name() const override { return "sh"; }
};

class inverse_shuffle_map final : public map1to1 {
 public:
  nat apply(nat n) const override { return sh_inv(n); }
  std::optional<nat> inverse(nat n) const override { return sh(n); }
  std::optional<nat> reach_bound(nat x) const override { return detail::block_end(x); }
  std::string name() const override { return "sh-inv"; }
};

class identity_map final : public map1to1 {
 public:
  nat apply(nat n) const override { return require_positive(n, "k"); }
  std::optional<nat> inverse(nat n) const override { return n; }
  std::optional<interval_union> preimage_of_interval(const interval& I) const override {
    return interval_union({I});
  }
  std::optional<nat> reach_bound(nat x) const override { return x; }
  std::string name() const override { return "identity"; }
};

inline map_ptr make_sh() { return std::make_shared<shuffle_map>(); }
inline map_ptr make_sh_inv() { return std::make_shared<inverse_shuffle_map>(); }
inline map_ptr make_identity() { return std::make_shared<identity_map>(); }

/// {n : f(n) in I}, using the structured fast path when the map has one, the
/// inverse when present, and otherwise a domain scan up to the reach bound.
inline interval_union preimage(const map1to1& f, const interval& I) {
  if (auto fast = f.preimage_of_interval(I)) return *fast;
  std::vector<nat> pts;
  if (f.inverse(I.a())) {
    for (nat x = I.a();; ++x) {
      if (auto n = f.inverse(x)) pts.push_back(*n);
      if (x == I.b()) break;
    }
  } else if (auto bound = f.reach_bound(I.b())) {
    for (nat n = 1; n <= *bound; ++n) {
      if (I.contains(f.apply(n))) pts.push_back(n);
    }
  } else {
    throw error("map '" + f.name() + "' declares no inverse or reach bound; preimages are not computable");
  }
  std::sort(pts.begin(), pts.end());
  interval_union out;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    while (j + 1 < pts.size() && pts[j + 1] == pts[j] + 1) ++j;
    out.add(interval(pts[i], pts[j]));
    i = j + 1;
  }
  return out;
}

struct collision {
  nat first;   // earlier domain point
  nat second;  // later domain point with the same value
  nat value;

  friend bool operator==(const collision&, const collision&) = default;
};

struct injectivity_report {
  interval window;
  bool ok = true;
  std::optional<collision> found;
};

/// First collision in scan order among values[i] = f(lo + i): the smallest
/// second point whose value already appeared, paired with that earlier point.
inline std::optional<collision> first_collision(nat lo, const std::vector<nat>& values) {
  if (values.empty()) return std::nullopt;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const nat span = *mx - *mn;
  if (span < (nat{1} << 28)) {
    std::vector<bool> seen(span + 1, false);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const nat v = values[i] - *mn;
      if (seen[v]) {
        const auto j = static_cast<std::size_t>(std::find(values.begin(), values.end(), values[i]) - values.begin());
        return collision{lo + j, lo + i, values[i]};
      }
      seen[v] = true;
    }
    return std::nullopt;
  }
  std::vector<std::pair<nat, nat>> order;  // (value, index)
  order.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) order.emplace_back(values[i], i);
  std::sort(order.begin(), order.end());
  std::optional<collision> best;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i].first != order[i - 1].first) continue;
    if (i >= 2 && order[i - 2].first == order[i].first) continue;
    collision c{lo + order[i - 1].second, lo + order[i].second, order[i].first};
    if (!best || c.second < best->second) best = c;
  }
  return best;
}

/// Same as first_collision for scattered (domain point, value) pairs.
inline std::optional<collision> first_collision(std::vector<std::pair<nat, nat>> points) {
  std::sort(points.begin(), points.end(), [](const auto& x, const auto& y) {
    return std::pair(x.second, x.first) < std::pair(y.second, y.first);
  });
  std::optional<collision> best;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].second != points[i - 1].second) continue;
    if (i >= 2 && points[i - 2].second == points[i].second) continue;
    collision c{points[i - 1].first, points[i].first, points[i].second};
    if (!best || c.second < best->second) best = c;
  }
  return best;
}

inline injectivity_report verify_injective(const map1to1& f, const interval& window) {
  if (window.size() > (nat{1} << 26)) throw error("verify_injective window larger than 2^26");
  std::vector<nat> values;
  values.reserve(window.size());
  for (nat n = window.a();; ++n) {
    values.push_back(f.apply(n));
    if (n == window.b()) break;
  }
  injectivity_report rep{window, true, first_collision(window.a(), values)};
  rep.ok = !rep.found.has_value();
  return rep;
}

/// f(S) intersected with the window, materialized. The domain is scanned up to
/// scan_bound, or up to the map's reach bound for the window's right end.
inline std::shared_ptr<bit_window_set> image_on_window(const map1to1& f, const nat_set& S, const interval& window,
                                                       std::optional<nat> scan_bound = std::nullopt) {
  if (!scan_bound) scan_bound = f.reach_bound(window.b());
  if (!scan_bound) {
    throw error("map '" + f.name() + "' declares no reach bound; an explicit domain scan bound is required");
  }
  auto out = std::make_shared<bit_window_set>(f.name() + "(" + S.name() + ")", window);
  for (nat n = 1; n <= *scan_bound; ++n) {
    if (!S.contains(n)) continue;
    const nat v = f.apply(n);
    if (window.contains(v)) out->insert(v);
  }
  out->seal();
  return out;
}

}  // namespace natdens
