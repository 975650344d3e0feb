#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natdens/interval.hpp"
#include "natdens/maps.hpp"
#include "natdens/rational.hpp"

namespace natdens {

/// A +p-interval I, a disjoint family of m-intervals Js whose images should
/// cover I, and the inclusion/omission thresholds q and r.
struct covering_instance {
  map_ptr f;
  interval I{1, 1};
  std::vector<interval> Js;
  rational q;
  rational r;
  rational m;
  rational p;
};

enum class covering_fault { bad_parameter, not_disjoint, not_m_interval, not_plus_p, not_covered };

class covering_error : public error {
 public:
  covering_error(covering_fault fault, const std::string& what) : error(what), fault_(fault) {}
  covering_fault fault() const { return fault_; }

 private:
  covering_fault fault_;
};

struct covering_report {
  std::vector<nat> hits;             // ||I intersect f(J)|| per J, in input order
  std::vector<rational> inclusion;   // hits / ||J||
  std::vector<interval> C;           // J with inclusion >= q
  std::vector<interval> T;           // the rest
  interval_union T_union;
  nat fT_in_I = 0;                   // ||f(T) intersect I||
  rational omission;                 // fT_in_I / ||I||
  bool condition_holds = false;      // fT_in_I < r ||I||
};

namespace detail {

inline void require_unit_open(const rational& x, const char* what) {
  if (x <= rational(0) || x >= rational(1)) throw covering_error(covering_fault::bad_parameter, std::string(what) + " must lie in (0,1), got " + x.str());
}

// ||I intersect f(J)|| for every J.
inline std::vector<nat> covering_hits(const map1to1& f, const interval& I, const std::vector<interval>& Js) {
  std::vector<nat> hits;
  hits.reserve(Js.size());
  std::optional<interval_union> pre = f.preimage_of_interval(I);
  if (!pre && f.inverse(I.a())) pre = preimage(f, I);
  for (const auto& J : Js) {
    if (pre) {
      hits.push_back(pre->overlap(J));
      continue;
    }
    nat c = 0;
    for (nat n = J.a();; ++n) {
      c += I.contains(f.apply(n)) ? 1 : 0;
      if (n == J.b()) break;
    }
    hits.push_back(c);
  }
  return hits;
}

}  // namespace detail

/// Checks the instance (disjoint m-intervals, I a +p-interval, I inside the
/// union of the images) and computes C, T and the omission ||f(T) cap I|| / ||I||.
/// Coverage is decided by counting, which assumes f is 1-1.
inline covering_report evaluate_covering(const covering_instance& inst) {
  if (!inst.f) throw covering_error(covering_fault::bad_parameter, "covering instance has no map");
  detail::require_unit_open(inst.q, "q");
  detail::require_unit_open(inst.r, "r");
  if (inst.m <= rational(1)) throw covering_error(covering_fault::bad_parameter, "m must be > 1");
  if (inst.p <= rational(1)) throw covering_error(covering_fault::bad_parameter, "p must be > 1");
  if (inst.Js.empty()) throw covering_error(covering_fault::not_covered, "I not covered: no covering intervals");

  std::vector<interval> sorted = inst.Js;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j - 1].intersects(sorted[j])) {
      throw covering_error(covering_fault::not_disjoint,
                           "intervals not disjoint: " + sorted[j - 1].str() + " and " + sorted[j].str());
    }
  }
  for (const auto& J : inst.Js) {
    if (!is_m_interval(J, inst.m)) {
      throw covering_error(covering_fault::not_m_interval, J.str() + " is not an m-interval for m=" + inst.m.str());
    }
  }
  if (!is_plus_m_interval(inst.I, inst.p)) {
    throw covering_error(covering_fault::not_plus_p, inst.I.str() + " is not a +p-interval for p=" + inst.p.str());
  }

  covering_report rep;
  rep.hits = detail::covering_hits(*inst.f, inst.I, inst.Js);
  nat covered = 0;
  for (nat h : rep.hits) covered += h;
  if (covered != inst.I.size()) {
    throw covering_error(covering_fault::not_covered, "I not covered: images of the intervals reach " +
                                                          std::to_string(covered) + " of " +
                                                          std::to_string(inst.I.size()) + " elements of " +
                                                          inst.I.str());
  }

  for (std::size_t j = 0; j < inst.Js.size(); ++j) {
    const interval& J = inst.Js[j];
    rational inc(static_cast<rational::wide>(rep.hits[j]), static_cast<rational::wide>(J.size()));
    rep.inclusion.push_back(inc);
    if (inc >= inst.q) {
      rep.C.push_back(J);
    } else {
      rep.T.push_back(J);
      rep.T_union.add(J);
      rep.fT_in_I += rep.hits[j];
    }
  }
  rep.omission = rational(static_cast<rational::wide>(rep.fT_in_I), static_cast<rational::wide>(inst.I.size()));
  rep.condition_holds = rep.omission < inst.r;
  return rep;
}

/// (m - 1)(b + a): at most this many elements of I = [a,b] fall outside the
/// m-intervals of a disjoint tiling that lie entirely inside I.
inline rational boundary_loss_bound(const interval& I, const rational& m) {
  require_ratio_above_one(m);
  return (m - rational(1)) * rational(static_cast<std::int64_t>(I.a() + I.b()));
}

/// p' = 1 + ((p-1)/p) r / 9: components of sh^-1(I) with mu <= p' are small
/// enough to drop.
inline rational shuffle_drop_threshold(const rational& p, const rational& r) {
  return rational(1) + rational::of(1, 9) * ((p - rational(1)) / p) * r;
}

/// Largest m = 1 + 1/t with m - 1 < ((p'-1)/(p'+1)) (r/3) and m^3 <= p'.
inline rational shuffle_covering_m(const rational& p, const rational& r) {
  const rational pp = shuffle_drop_threshold(p, r);
  const rational bound = (pp - rational(1)) / (pp + rational(1)) * r / rational(3);
  auto t = static_cast<std::int64_t>((rational(1) / bound).floor()) + 1;
  for (;; ++t) {
    const rational m = rational(1) + rational::of(1, t);
    if (m - rational(1) < bound && m * m * m <= pp) return m;
  }
}

struct shuffle_component {
  interval part;
  rational mu;
  bool kept = false;
  nat covered = 0;    // elements of the part inside the returned tiles
  nat uncovered = 0;
};

struct shuffle_covering {
  rational p_prime;
  rational m;
  std::vector<shuffle_component> components;
  std::vector<interval> Js;
  nat uncovered = 0;  // ||sh^-1(I) minus the union of Js||
  rational omission;  // uncovered / ||I||
};

/// Covering of sh^-1(I) by m-intervals that lie inside it, leaving fewer than
/// r ||I|| elements out: small components (mu <= p') are dropped and every
/// other component is tiled from its left end, keeping the tiles that fit.
inline shuffle_covering construct_covering_sh(const interval& I, const rational& p, const rational& r) {
  require_ratio_above_one(p, "p");
  if (r <= rational(0) || r >= rational(1)) throw error("r must lie in (0,1)");
  if (!is_plus_m_interval(I, p)) throw error(I.str() + " is not a +p-interval for p=" + p.str());
  const rational min_a = rational(6) / ((p - rational(1)) * r);
  if (rational(static_cast<std::int64_t>(I.a())) <= min_a) {
    throw error("left endpoint " + std::to_string(I.a()) + " must exceed 6/((p-1)r) = " + min_a.str());
  }

  shuffle_covering out;
  out.p_prime = shuffle_drop_threshold(p, r);
  out.m = shuffle_covering_m(p, r);
  const interval_union pre = sh_preimage_interval(I);
  for (const auto& part : pre.parts()) {
    shuffle_component comp{part, mu(part)};
    comp.kept = comp.mu > out.p_prime;
    if (comp.kept) {
      for (const auto& J : tile_m_intervals(part.a(), part.b(), out.m)) {
        if (!part.contains(J)) continue;
        out.Js.push_back(J);
        comp.covered += J.size();
      }
    }
    comp.uncovered = part.size() - comp.covered;
    out.uncovered += comp.uncovered;
    out.components.push_back(comp);
  }
  out.omission = rational(static_cast<rational::wide>(out.uncovered), static_cast<rational::wide>(I.size()));
  return out;
}

struct shinv_witness {
  covering_instance instance;
  covering_report report;
  bool is_witness = false;  // the covering condition fails on this instance
};

/// For f = sh^-1 and p = 7/5: I = [2^i, (3/2)2^i - 1] is exactly the image of the evens of
/// block i, so tiling the block with m-intervals covers I while every tile
/// sends only about half of itself into I.
inline shinv_witness witness_shinv(unsigned i, const rational& m, const rational& q,
                                   const rational& r = rational::of(1, 2)) {
  if (i < 4 || i > 60) throw error("witness_shinv needs 4 <= i <= 60");
  if (m <= rational(1) || m > rational(2)) throw error("witness_shinv needs 1 < m <= 2");
  if (q <= rational(0) || q >= rational(1)) throw error("q must lie in (0,1)");
  const nat base = pow2(i);
  const nat block_last = 2 * base - 1;
  auto tiles = tile_m_intervals(base, block_last, m);
  for (const auto& J : tiles) {
    if (J.size() < 4) throw error("block 2^" + std::to_string(i) + " too small: tile " + J.str() + " has fewer than 4 elements");
  }
  shinv_witness w;
  w.instance = covering_instance{make_sh_inv(), interval(base, base + base / 2 - 1), std::move(tiles), q, r, m,
                                 rational::of(7, 5)};
  w.report = evaluate_covering(w.instance);
  w.is_witness = !w.report.condition_holds;
  return w;
}

struct search_result {
  std::optional<covering_instance> witness;
  std::optional<covering_report> report;
  nat examined = 0;
};

/// Candidate +p-intervals with a > N, block by block: the whole block, its two
/// halves, then [a, floor(p a) + 1] for a in {2^i, (5/4)2^i, (3/2)2^i}.
inline std::vector<interval> violation_candidates(const rational& p, nat N, nat budget) {
  std::vector<interval> out;
  for (unsigned i = 2; i < 60 && out.size() < budget; ++i) {
    const nat base = pow2(i);
    std::vector<interval> here{interval(base, 2 * base - 1), interval(base, base + base / 2 - 1),
                               interval(base + base / 2, 2 * base - 1)};
    for (nat a : {base, base + base / 4, base + base / 2}) {
      here.emplace_back(a, static_cast<nat>(p.floor_times(a) + 1));
    }
    for (const auto& I : here) {
      if (out.size() >= budget) break;
      if (I.a() <= N || !is_plus_m_interval(I, p)) continue;
      out.push_back(I);
    }
  }
  return out;
}

/// Bounded falsifier for the covering condition. For each candidate I the
/// canonical covering tiles [min f^-1(I), max f^-1(I)] with m-intervals and
/// keeps the tiles whose images meet I. Returns the first candidate (in the
/// order above) where that covering violates the condition. An empty result
/// means no violation was found within the budget, nothing more.
inline search_result search_violation(const map_ptr& f, const rational& p, const rational& q, const rational& r,
                                      const rational& m, nat N, nat budget) {
  require_ratio_above_one(p, "p");
  require_ratio_above_one(m);
  search_result out;
  for (const auto& I : violation_candidates(p, N, budget)) {
    ++out.examined;
    const interval_union pre = preimage(*f, I);
    if (pre.empty()) continue;
    const nat lo = pre.parts().front().a();
    const nat hi = pre.parts().back().b();
    covering_instance inst{f, I, {}, q, r, m, p};
    for (const auto& J : tile_m_intervals(lo, hi, m)) {
      if (pre.overlap(J) > 0) inst.Js.push_back(J);
    }
    covering_report rep = evaluate_covering(inst);
    if (!rep.condition_holds) {
      out.witness = std::move(inst);
      out.report = std::move(rep);
      return out;
    }
  }
  return out;
}

}  // namespace natdens
