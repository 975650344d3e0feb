#pragma once

// Brute-force reference implementations. Nothing here uses the interval
// structure the library relies on; everything is explicit element sets.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "natdens/covering.hpp"
#include "natdens/interval.hpp"
#include "natdens/maps.hpp"
#include "natdens/rational.hpp"

namespace oracle {

using natdens::interval;
using natdens::nat;
using natdens::rational;

// sh on [1, 2^(top+1) - 1], built by dealing each block's lower half onto its
// evens and its upper half onto its odds, in order.
inline std::vector<nat> shuffle_table(unsigned top) {
  std::vector<nat> f((nat{1} << (top + 1)), 0);
  for (nat k = 1; k < 4 && k < f.size(); ++k) f[k] = k;
  for (unsigned i = 2; i <= top; ++i) {
    const nat base = nat{1} << i;
    std::vector<nat> ev, od;
    for (nat v = base; v < 2 * base; ++v) (v % 2 == 0 ? ev : od).push_back(v);
    nat k = base;
    for (nat v : ev) f[k++] = v;
    for (nat v : od) f[k++] = v;
  }
  return f;
}

inline std::set<nat> preimage_set(const natdens::map1to1& f, const interval& I, nat domain_max) {
  std::set<nat> out;
  for (nat n = 1; n <= domain_max; ++n) {
    if (I.contains(f.apply(n))) out.insert(n);
  }
  return out;
}

inline std::set<nat> members(const natdens::interval_union& u) {
  std::set<nat> out;
  for (const auto& p : u.parts()) {
    for (nat n = p.a(); n <= p.b(); ++n) out.insert(n);
  }
  return out;
}

// Maximal runs of consecutive elements.
inline std::vector<interval> runs(const std::set<nat>& s) {
  std::vector<interval> out;
  for (nat n : s) {
    if (!out.empty() && out.back().b() + 1 == n) {
      out.back() = interval(out.back().a(), n);
    } else {
      out.emplace_back(n, n);
    }
  }
  return out;
}

struct covering_result {
  std::vector<rational> inclusion;
  std::vector<bool> in_C;
  nat fT_in_I = 0;
  rational omission;
  bool holds = false;
};

// Inclusion, C/T split and omission from explicit element sets.
inline covering_result evaluate(const natdens::covering_instance& inst) {
  std::set<nat> I;
  for (nat x = inst.I.a(); x <= inst.I.b(); ++x) I.insert(x);
  covering_result out;
  std::set<nat> fT;
  for (const auto& J : inst.Js) {
    std::set<nat> image;
    for (nat n = J.a(); n <= J.b(); ++n) {
      const nat v = inst.f->apply(n);
      if (I.count(v)) image.insert(v);
    }
    const rational inc(static_cast<rational::wide>(image.size()), static_cast<rational::wide>(J.size()));
    out.inclusion.push_back(inc);
    out.in_C.push_back(inc >= inst.q);
    if (!out.in_C.back()) fT.insert(image.begin(), image.end());
  }
  out.fT_in_I = fT.size();
  out.omission = rational(static_cast<rational::wide>(fT.size()), static_cast<rational::wide>(I.size()));
  out.holds = out.omission < inst.r;
  return out;
}

// ||S_n|| for the union of [4^m, 2*4^m - 1], counted element by element.
inline std::vector<nat> nodensity_prefix_counts(nat n_max) {
  std::vector<nat> c(n_max + 1, 0);
  for (nat n = 1; n <= n_max; ++n) {
    const unsigned lg = natdens::floor_log2(n);
    c[n] = c[n - 1] + (lg % 2 == 0 ? 1 : 0);
  }
  return c;
}

}  // namespace oracle
