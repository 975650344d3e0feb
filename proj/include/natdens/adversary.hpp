#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natdens/covering.hpp"
#include "natdens/density.hpp"
#include "natdens/interval.hpp"
#include "natdens/maps.hpp"
#include "natdens/natset.hpp"

namespace natdens {

/// {n : 4^m <= n < 2 * 4^m, m >= 0}, a set with prefix-density limsup 2/3 and
/// liminf 1/3.
inline set_ptr no_density_example() {
  interval_union parts;
  for (unsigned m = 0; 2 * m + 1 < 64; ++m) parts.add(interval(pow2(2 * m), pow2(2 * m + 1) - 1));
  return std::make_shared<interval_union_set>("nodensity", std::move(parts));
}

/// sh^-1(evens) in closed form: {2} u [2^i, (3/2)2^i - 1] for i >= 2.
inline set_ptr shuffle_inverse_of_evens() {
  interval_union parts;
  parts.add(interval(2, 2));
  for (unsigned i = 2; i < 64; ++i) parts.add(interval(pow2(i), pow2(i) + pow2(i - 1) - 1));
  return std::make_shared<interval_union_set>("sh-inv(evens)", std::move(parts));
}

/// floor(D(x-1)) < floor(Dx): the unconstrained rule that keeps ||S_n|| = floor(Dn).
inline bool default_include(const rational& D, nat x) {
  require_positive(x, "x");
  if (D < rational(0) || D > rational(1)) throw error("D must lie in [0,1]");
  return D.floor_times(x - 1) < D.floor_times(x);
}

struct stage_query {
  unsigned k;
  rational m;  // 1 + 1/k
  nat M;       // every covering interval must start above M
  nat N;       // I must start above N
};

/// Produces, for a stage, a +p-interval I and (1+1/k)-intervals violating the
/// covering condition.
using witness_generator = std::function<covering_instance(const stage_query&)>;

/// Built-in generator for sh^-1: the least block 2^i above max(M, N) whose
/// tiles all have at least 4 elements.
inline witness_generator shinv_witness_generator(const rational& q, const rational& r) {
  return [q, r](const stage_query& s) {
    unsigned i = std::max(4U, floor_log2(std::max(s.M, s.N)) + 1);
    for (; i <= 60; ++i) {
      try {
        return witness_shinv(i, s.m, q, r).instance;
      } catch (const covering_error&) {
        throw;
      } catch (const error&) {
        continue;  // tiles too small at this block; try the next one
      }
    }
    throw error("no sh-inv witness block found for stage " + std::to_string(s.k));
  };
}

/// Serves stored witness instances: the first one whose m matches the stage,
/// whose I starts above N and whose intervals all start above M.
inline witness_generator stored_witness_generator(std::vector<covering_instance> stored) {
  return [stored = std::move(stored)](const stage_query& s) {
    for (const auto& w : stored) {
      if (w.m != s.m || w.I.a() <= s.N) continue;
      const bool above = std::all_of(w.Js.begin(), w.Js.end(), [&](const interval& J) { return J.a() > s.M; });
      if (above) return w;
    }
    throw error("no stored witness fits stage " + std::to_string(s.k) + " (m=" + s.m.str() +
                ", N=" + std::to_string(s.N) + ", M=" + std::to_string(s.M) + ")");
  };
}

/// Bookkeeping of one stage of the construction.
struct stage_state {
  unsigned k = 0;
  nat L_prev = 0;
  nat M = 0;
  nat N = 0;
  nat L = 0;
  interval I{1, 1};
  std::size_t covering_size = 0;   // intervals in the witness
  std::size_t constrained = 0;     // intervals whose image meets I
  nat image_hits = 0;              // ||f(S) intersect I||
  rational image_density;          // image_hits / ||I||
  rational image_bound;            // D - D r / 2
  rational max_deviation;          // max |S_n / n - D| over n in [L_prev + 1, L]
  rational deviation_bound;        // 2 / k
  rational max_inside_share;       // max over J of (chosen in J cap f^-1(I)) / ||J cap f^-1(I)||
  rational max_inside_share_excess;// max over J of that share minus (D + 1/||J||); <= 0 expected
};

struct adversary_report {
  rational q;
  rational r;
  rational D;
  std::vector<stage_state> stages;
  unsigned stages_requested = 0;
  bool truncated = false;
  nat window_cap = 0;
  rational final_density;  // ||S_cap|| / cap
};

struct adversary_result {
  std::shared_ptr<bit_window_set> S;
  adversary_report report;
};

/// Builds a set S of density D = (1-q)/2 stage by stage so that f(S) has
/// density at most D - Dr/2 on each stage's witness interval I_k.
///
/// Outside the witness intervals a point joins S by default_include. Entering
/// a witness interval J = [c,d] whose image meets I, exactly
/// floor(Dd) - ||S_{c-1}|| of its points are added, smallest first among the
/// points mapping outside I, then smallest first among the rest.
inline adversary_result build_adversarial_set(const map_ptr& f, const rational& q, const rational& r,
                                              const witness_generator& witness_gen, unsigned stages,
                                              nat window_cap = nat{1} << 24) {
  if (q <= rational(0) || q >= rational(1)) throw error("q must lie in (0,1)");
  if (r <= rational(0) || r >= rational::of(1, 2)) throw error("r must lie in (0,1/2)");
  if (stages == 0) throw error("at least one stage is required");
  require_positive(window_cap, "window cap");

  adversary_result out;
  adversary_report& rep = out.report;
  rep.q = q;
  rep.r = r;
  rep.D = (rational(1) - q) / rational(2);
  rep.stages_requested = stages;
  rep.window_cap = window_cap;
  const rational D = rep.D;
  const rational image_bound = D - D * r / rational(2);

  out.S = std::make_shared<bit_window_set>("adversary", interval(1, window_cap));
  bit_window_set& S = *out.S;
  nat included = 0;  // ||S_{cursor-1}||
  nat cursor = 1;

  auto assign_default_until = [&](nat last) {
    for (; cursor <= last; ++cursor) {
      if (default_include(D, cursor)) {
        S.insert(cursor);
        ++included;
      }
    }
  };

  const rational room = rational(4) * (rational(1) - r) / (r * (rational(1) - q));
  nat L_prev = 0;
  for (unsigned k = 1; k <= stages; ++k) {
    stage_state st;
    st.k = k;
    st.L_prev = L_prev;
    const rational m = rational(1) + rational::of(1, k);
    const rational M_real = std::max(m * rational(static_cast<std::int64_t>(L_prev)), rational(k) * room);
    st.M = static_cast<nat>(M_real.ceil());
    if (st.M >= window_cap) {
      rep.truncated = true;
      break;
    }
    nat max_image = 0;
    for (nat x = 1; x <= st.M; ++x) max_image = std::max(max_image, f->apply(x));
    st.N = max_image + 1;

    covering_instance w = witness_gen(stage_query{k, m, st.M, st.N});
    if (w.m != m) throw error("stage " + std::to_string(k) + " witness uses m=" + w.m.str() + ", expected " + m.str());
    w.f = f;
    w.q = q;
    if (w.I.a() <= st.N) throw error("stage witness I=" + w.I.str() + " does not start above N=" + std::to_string(st.N));
    w.r = r;
    const covering_report cov = evaluate_covering(w);
    if (cov.condition_holds) {
      throw error("stage " + std::to_string(k) + " witness does not violate the covering condition (omission " +
                  cov.omission.str() + " < r)");
    }
    st.I = w.I;
    st.covering_size = w.Js.size();

    std::vector<std::pair<interval, nat>> active;  // (J, ||J cap f^-1(I)||)
    for (std::size_t j = 0; j < w.Js.size(); ++j) {
      if (cov.hits[j] > 0) active.emplace_back(w.Js[j], cov.hits[j]);
    }
    std::sort(active.begin(), active.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [J, hits] : active) {
      if (J.a() <= st.M) throw error("witness interval " + J.str() + " does not start above M=" + std::to_string(st.M));
      if ((rational(1) - q) * rational(static_cast<std::int64_t>(J.size())) <= rational(4)) {
        throw error("witness interval " + J.str() + " is too short: (1-q)||J|| must exceed 4");
      }
    }
    st.constrained = active.size();
    if (active.back().first.b() > window_cap) {
      rep.truncated = true;
      break;
    }

    const nat stage_first = cursor;
    st.max_inside_share_excess = rational(-1);
    for (const auto& [J, hits] : active) {
      assign_default_until(J.a() - 1);
      const rational::wide target = D.floor_times(J.b());
      const rational::wide need_w = target - static_cast<rational::wide>(included);
      if (need_w < 0 || need_w > static_cast<rational::wide>(J.size())) {
        throw error("cannot reach floor(D d) inside " + J.str());
      }
      nat need = static_cast<nat>(need_w);
      std::vector<nat> outside, inside;
      for (nat n = J.a(); n <= J.b(); ++n) (w.I.contains(f->apply(n)) ? inside : outside).push_back(n);
      nat chosen_inside = 0;
      for (nat n : outside) {
        if (need == 0) break;
        S.insert(n);
        --need;
        ++included;
      }
      for (nat n : inside) {
        if (need == 0) break;
        S.insert(n);
        --need;
        ++included;
        ++chosen_inside;
      }
      cursor = J.b() + 1;
      st.image_hits += chosen_inside;
      const rational share(static_cast<rational::wide>(chosen_inside), static_cast<rational::wide>(hits));
      st.max_inside_share = std::max(st.max_inside_share, share);
      const rational excess = share - (D + rational(1, static_cast<rational::wide>(J.size())));
      st.max_inside_share_excess = std::max(st.max_inside_share_excess, excess);
    }
    st.L = cursor - 1;

    // exact max of |c/n - D| over the stage, compared by cross-multiplication
    S.seal();
    rational::wide best_num = 0, best_den = 1;
    nat c = S.count_leq(stage_first - 1);
    for (nat n = stage_first; n <= st.L; ++n) {
      c += S.contains(n) ? 1 : 0;
      rational::wide num = static_cast<rational::wide>(c) * D.den() - rational::wide{D.num()} * n;
      if (num < 0) num = -num;
      const rational::wide den = static_cast<rational::wide>(n) * D.den();
      if (num * best_den > best_num * den) {
        best_num = num;
        best_den = den;
      }
    }
    st.max_deviation = rational(best_num, best_den);
    st.deviation_bound = rational::of(2, k);
    st.image_density = rational(static_cast<rational::wide>(st.image_hits), static_cast<rational::wide>(st.I.size()));
    st.image_bound = image_bound;
    rep.stages.push_back(st);
    L_prev = st.L;
  }

  assign_default_until(window_cap);
  S.seal();
  rep.final_density = prefix_density(S, window_cap);
  return out;
}

struct nonpreservation_demo {
  nat n_max = 0;
  rational evens_density;            // density of the evens at the largest even n <= n_max
  density_profile image_profile;     // prefix densities of sh^-1(evens)
  nat brute_force_window = 0;
  bool matches_brute_force = false;  // closed form == {sh_inv(2t)} on [1, brute_force_window]
  std::vector<density_sample> checkpoints;  // n = (3/2)2^i - 1 and 2^(i+1) - 1
};

/// The evens have density 1/2 but sh^-1(evens) oscillates between about 2/3
/// and 1/2.
inline nonpreservation_demo shinv_nonpreservation_demo(nat n_max) {
  if (n_max < 1024) throw error("demo needs n_max >= 2^10");
  nonpreservation_demo out;
  out.n_max = n_max;
  const auto ev = evens();
  out.evens_density = prefix_density(*ev, n_max - n_max % 2);
  const auto image = shuffle_inverse_of_evens();
  out.image_profile = estimate_limits(*image, n_max, rational::of(1, 4), 64);

  out.brute_force_window = std::min<nat>(n_max, nat{1} << 16);
  const interval window(1, out.brute_force_window);
  const auto brute = image_on_window(inverse_shuffle_map{}, *ev, window);
  out.matches_brute_force = true;
  for (nat n = 1; n <= window.b(); ++n) {
    if (brute->contains(n) != image->contains(n)) {
      out.matches_brute_force = false;
      break;
    }
  }
  for (unsigned i = 2; i < 63; ++i) {
    const nat hi = pow2(i) + pow2(i - 1) - 1;
    const nat lo = 2 * pow2(i) - 1;
    if (hi > n_max) break;
    out.checkpoints.push_back({hi, prefix_density(*image, hi)});
    if (lo <= n_max) out.checkpoints.push_back({lo, prefix_density(*image, lo)});
  }
  return out;
}

}  // namespace natdens
