#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage/IO/parse error,
// 2 a checked property failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "natdens/adversary.hpp"
#include "natdens/covering.hpp"
#include "natdens/density.hpp"
#include "natdens/fndsl.hpp"
#include "natdens/json_io.hpp"
#include "natdens/maps.hpp"
#include "natdens/registry.hpp"

namespace natdens::cli {

using io::json;

inline std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void csv_row(std::ostream& os, const std::string& key, const rational& x) {
  os << key << ',' << x.num() << ',' << x.den() << ',' << fmt12(x.to_double()) << '\n';
}

inline void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot write '" + path + "'");
  write_json(f, j);
}

struct selftest_summary {
  nat instances = 0;
  nat valid = 0;
  nat rejected = 0;
  nat mismatches = 0;
};

/// Random covering instances inside [1, 2^12], evaluated and recomputed with
/// explicit element sets. Used by the hidden `selftest` subcommand.
inline selftest_summary covering_selftest(std::uint64_t seed, nat count) {
  std::mt19937_64 rng(seed);
  auto pick = [&](nat lo, nat hi) { return std::uniform_int_distribution<nat>(lo, hi)(rng); };
  const map_ptr maps[] = {make_identity(), make_sh(), make_sh_inv()};
  selftest_summary s;
  for (nat t = 0; t < count; ++t) {
    ++s.instances;
    covering_instance inst;
    inst.f = maps[pick(0, 2)];
    inst.m = rational(1) + rational::of(1, static_cast<std::int64_t>(pick(1, 12)));
    inst.p = rational::of(static_cast<std::int64_t>(pick(11, 30)), 10);
    const nat a = pick(8, 1200);
    inst.I = interval(a, static_cast<nat>(inst.p.floor_times(a)) + pick(1, 200));
    inst.q = rational::of(static_cast<std::int64_t>(pick(1, 99)), 100);
    inst.r = rational::of(static_cast<std::int64_t>(pick(1, 99)), 100);
    const interval_union pre = preimage(*inst.f, inst.I);
    const nat lo = pre.parts().front().a();
    for (const auto& J : tile_m_intervals(std::max<nat>(1, lo - std::min<nat>(lo - 1, pick(0, 5))),
                                          pre.parts().back().b(), inst.m)) {
      if (pre.overlap(J) > 0) inst.Js.push_back(J);
    }
    try {
      const covering_report rep = evaluate_covering(inst);
      ++s.valid;
      nat fT = 0;
      std::set<nat> Iset;
      for (nat x = inst.I.a(); x <= inst.I.b(); ++x) Iset.insert(x);
      for (std::size_t j = 0; j < inst.Js.size(); ++j) {
        nat hits = 0;
        for (nat n = inst.Js[j].a(); n <= inst.Js[j].b(); ++n) hits += Iset.count(inst.f->apply(n));
        if (hits != rep.hits[j]) ++s.mismatches;
        if (rational(static_cast<rational::wide>(hits), static_cast<rational::wide>(inst.Js[j].size())) < inst.q) {
          fT += hits;
        }
      }
      if (fT != rep.fT_in_I) ++s.mismatches;
    } catch (const covering_error&) {
      ++s.rejected;
    }
  }
  return s;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"natdens: natural density, density-preserving maps and covering conditions on N"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  std::uint64_t seed = 1;
  app.add_option("--threads", threads, "Worker threads for scan-heavy commands")->check(CLI::Range(1U, 256U));
  app.add_option("--seed", seed, "Seed for the selftest instance generator");

  // shared flag storage
  std::string set_name, map_name, format, file, out_path, report_path, window_text, interval_text, mode_text = "auto";
  std::string D_text, m_text, eps_text, p_text, q_text, r_text, tail_text = "1/4", witnesses_path;
  nat n_max = 0, grid = 64, N = 0, scan_limit = 0, k = 0, lo = 0, hi = 0, budget = 50, count = 1000;
  nat window_cap = nat{1} << 24, scan_bound = 0;
  unsigned stages = 8;

  auto add_set_flags = [&](CLI::App* sub) {
    sub->add_option("--set", set_name, "Set specification")->required();
    sub->add_option("--scan-bound", scan_bound, "Domain scan bound for dsl-image sets");
  };

  auto* density = app.add_subcommand("density", "Prefix densities, limit estimates, interval-density checks");
  density->require_subcommand(1);
  auto* profile = density->add_subcommand("profile", "Prefix densities at the sample points");
  add_set_flags(profile);
  profile->add_option("--n-max", n_max, "Largest n")->required();
  profile->add_option("--grid", grid, "Geometric grid size");
  auto* limits = density->add_subcommand("limits", "Tail limsup/liminf estimates");
  add_set_flags(limits);
  limits->add_option("--n-max", n_max, "Largest n")->required();
  limits->add_option("--grid", grid, "Geometric grid size");
  limits->add_option("--tail", tail_text, "Tail fraction of n-max");
  auto* thm1 = density->add_subcommand("check-thm1", "Worst +m-interval density deviation from D");
  add_set_flags(thm1);
  thm1->add_option("--D", D_text, "Claimed density")->required();
  thm1->add_option("--m", m_text, "Interval ratio m > 1")->required();
  thm1->add_option("--epsilon", eps_text, "Tolerance")->required();
  thm1->add_option("--N", N, "Intervals start above N")->required();
  thm1->add_option("--scan-limit", scan_limit, "Largest right endpoint")->required();
  thm1->add_option("--mode", mode_text, "auto | exhaustive | sampled")
      ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));

  auto* map = app.add_subcommand("map", "Evaluate, tabulate and verify maps");
  map->require_subcommand(1);
  auto* map_eval = map->add_subcommand("eval", "f(k)");
  map_eval->add_option("--map", map_name, "sh | sh-inv | identity | FILE.dsl")->required();
  map_eval->add_option("--k", k, "Argument")->required();
  auto* map_table = map->add_subcommand("table", "k,f(k) for k in [lo,hi]");
  map_table->add_option("--map", map_name, "sh | sh-inv | identity | FILE.dsl")->required();
  map_table->add_option("--lo", lo, "First k")->required();
  map_table->add_option("--hi", hi, "Last k")->required();
  auto* map_verify = map->add_subcommand("verify", "Injectivity on a window");
  map_verify->add_option("--map", map_name, "sh | sh-inv | identity | FILE.dsl")->required();
  map_verify->add_option("--window", window_text, "lo:hi")->required();

  auto* dsl_cmd = app.add_subcommand("dsl", "Map specification files");
  dsl_cmd->require_subcommand(1);
  auto* dsl_check = dsl_cmd->add_subcommand("check", "Totality and injectivity on a window");
  dsl_check->add_option("file", file, "DSL file")->required();
  dsl_check->add_option("--window", window_text, "lo:hi")->required();

  auto* cover = app.add_subcommand("cover", "Covering-condition instances");
  cover->require_subcommand(1);
  auto* cover_eval = cover->add_subcommand("eval", "Evaluate an instance file");
  cover_eval->add_option("--file", file, "Instance JSON")->required();
  auto* cover_construct = cover->add_subcommand("construct", "Shuffle covering of sh^-1(I)");
  cover_construct->add_option("--map", map_name, "Only sh is supported")->required();
  cover_construct->add_option("--I", interval_text, "a:b")->required();
  cover_construct->add_option("--p", p_text, "p > 1")->required();
  cover_construct->add_option("--r", r_text, "r in (0,1)")->required();
  cover_construct->add_option("--out", out_path, "Also write the covering as an instance file");
  auto* cover_search = cover->add_subcommand("search", "Bounded search for a violation");
  cover_search->add_option("--map", map_name, "Map")->required();
  cover_search->add_option("--p", p_text, "p > 1")->required();
  cover_search->add_option("--q", q_text, "q in (0,1)")->required();
  cover_search->add_option("--r", r_text, "r in (0,1)")->required();
  cover_search->add_option("--m", m_text, "m > 1, or 'shuffle' for the shuffle covering ratio")->required();
  cover_search->add_option("--N", N, "Candidates start above N")->required();
  cover_search->add_option("--budget", budget, "Candidates to examine");
  cover_search->add_option("--out", out_path, "Write the witness instance here");

  auto* adversary = app.add_subcommand("adversary", "Density-D sets whose images lose density");
  adversary->require_subcommand(1);
  auto* adv_build = adversary->add_subcommand("build", "Stage-wise construction");
  adv_build->add_option("--map", map_name, "Map")->required();
  adv_build->add_option("--q", q_text, "q in (0,1)")->required();
  adv_build->add_option("--r", r_text, "r in (0,1/2)")->required();
  adv_build->add_option("--stages", stages, "Number of stages");
  adv_build->add_option("--window-cap", window_cap, "Largest materialized n");
  adv_build->add_option("--witnesses", witnesses_path, "Instance file with stage witnesses");
  adv_build->add_option("--out", out_path, "Write the set as a bits file");
  adv_build->add_option("--report", report_path, "Write the report here instead of stdout");
  auto* adv_demo = adversary->add_subcommand("demo", "sh^-1 takes the evens to a set without density");
  adv_demo->add_option("--n-max", n_max, "Largest n")->required();

  auto* selftest = app.add_subcommand("selftest", "");
  selftest->group("");
  selftest->add_option("--count", count, "Random instances");

  for (auto* sub : {profile, limits, thm1}) {
    sub->add_option("--window", window_text, "Materialization window for dsl-image sets (lo:hi)");
  }
  profile->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  limits->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  map_table->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    auto load_set = [&]() {
      set_options opts;
      if (scan_bound != 0) opts.scan_bound = scan_bound;
      if (!window_text.empty()) {
        opts.image_window = parse_interval(window_text);
      } else if (n_max != 0) {
        opts.image_window = interval(1, n_max);
      } else if (scan_limit != 0) {
        opts.image_window = interval(1, scan_limit);
      }
      return parse_set(set_name, opts);
    };

    if (profile->parsed()) {
      if (format.empty()) format = "csv";
      const auto S = load_set();
      const auto prof = estimate_limits(*S, n_max, rational::of(1, 4), grid);
      if (format == "json") {
        json j = io::envelope("density_profile");
        j["set"] = set_name;
        json rows = json::array();
        for (const auto& s : prof.samples) rows.push_back(json{{"n", s.n}, {"density", io::to_json(s.density)}});
        j["samples"] = std::move(rows);
        write_json(out, j);
      } else {
        out << "n,density_num,density_den,density_float\n";
        for (const auto& s : prof.samples) csv_row(out, std::to_string(s.n), s.density);
      }
      return 0;
    }
    if (limits->parsed()) {
      if (format.empty()) format = "json";
      const auto S = load_set();
      const auto prof = estimate_limits(*S, n_max, rational::parse(tail_text), grid);
      if (format == "csv") {
        out << "statistic,density_num,density_den,density_float\n";
        csv_row(out, "limsup_est", prof.limsup_est);
        csv_row(out, "liminf_est", prof.liminf_est);
      } else {
        write_json(out, io::to_json(prof, set_name, n_max));
      }
      return 0;
    }
    if (thm1->parsed()) {
      const auto S = load_set();
      const scan_mode mode = mode_text == "exhaustive" ? scan_mode::exhaustive
                             : mode_text == "sampled"  ? scan_mode::sampled
                                                       : scan_mode::automatic;
      const auto rep = check_thm1(*S, rational::parse(D_text), rational::parse(m_text), rational::parse(eps_text), N,
                                  scan_limit, mode, threads);
      write_json(out, io::to_json(rep));
      return rep.pass ? 0 : 2;
    }
    if (map_eval->parsed()) {
      out << resolve_map(map_name)->apply(require_positive(k, "k")) << '\n';
      return 0;
    }
    if (map_table->parsed()) {
      if (format.empty()) format = "csv";
      const auto f = resolve_map(map_name);
      const interval range(lo, hi);
      if (format == "json") {
        json j = io::envelope("map_table");
        j["map"] = map_name;
        json rows = json::array();
        for (nat x = range.a(); x <= range.b(); ++x) rows.push_back(json::array({x, f->apply(x)}));
        j["rows"] = std::move(rows);
        write_json(out, j);
      } else {
        out << "k,f(k)\n";
        for (nat x = range.a(); x <= range.b(); ++x) out << x << ',' << f->apply(x) << '\n';
      }
      return 0;
    }
    if (map_verify->parsed()) {
      const auto f = resolve_map(map_name);
      const auto rep = verify_injective(*f, parse_interval(window_text));
      write_json(out, io::to_json(rep, map_name));
      return rep.ok ? 0 : 2;
    }
    if (dsl_check->parsed()) {
      const auto spec = dsl::parse(read_text_file(file), file);
      const auto rep = dsl::check(spec, parse_interval(window_text));
      write_json(out, io::to_json(rep, file));
      return rep.total && rep.injective && !rep.first_failure ? 0 : 2;
    }
    if (cover_eval->parsed()) {
      const auto inst = io::load_instance(file);
      const auto rep = evaluate_covering(inst);
      write_json(out, io::to_json(inst, rep));
      return rep.condition_holds ? 0 : 2;
    }
    if (cover_construct->parsed()) {
      if (map_name != "sh") throw error("cover construct supports only --map sh");
      const interval I = parse_interval(interval_text);
      const rational p = rational::parse(p_text);
      const rational r = rational::parse(r_text);
      const auto cov = construct_covering_sh(I, p, r);
      write_json(out, io::to_json(cov, I, p, r));
      if (!out_path.empty()) {
        // As an instance over sh: these m-intervals cover all but `uncovered` points of I.
        write_json_file(out_path, io::instance_to_json(covering_instance{make_sh(), I, cov.Js, rational::of(99, 100),
                                                                         r, cov.m, p}));
      }
      return cov.omission < r ? 0 : 2;
    }
    if (cover_search->parsed()) {
      const rational p = rational::parse(p_text);
      const rational q = rational::parse(q_text);
      const rational r = rational::parse(r_text);
      const rational m = m_text == "shuffle" ? shuffle_covering_m(p, r) : rational::parse(m_text);
      const auto res = search_violation(resolve_map(map_name), p, q, r, m, N, budget);
      write_json(out, io::to_json(res));
      if (res.witness && !out_path.empty()) write_json_file(out_path, io::instance_to_json(*res.witness));
      return res.witness ? 2 : 0;
    }
    if (adv_build->parsed()) {
      const auto f = resolve_map(map_name);
      const rational q = rational::parse(q_text);
      const rational r = rational::parse(r_text);
      witness_generator gen;
      if (!witnesses_path.empty()) {
        gen = stored_witness_generator(io::load_instances(witnesses_path));
      } else if (f->name() == "sh-inv") {
        gen = shinv_witness_generator(q, r);
      } else {
        throw error("map '" + map_name + "' has no built-in witness generator; pass --witnesses FILE");
      }
      const auto res = build_adversarial_set(f, q, r, gen, stages, window_cap);
      const json j = io::to_json(res.report);
      if (report_path.empty()) {
        write_json(out, j);
      } else {
        write_json_file(report_path, j);
      }
      if (!out_path.empty()) save_bits(*res.S, out_path);
      for (const auto& s : res.report.stages) {
        if (!(s.max_deviation < s.deviation_bound) || !(s.image_density < s.image_bound)) return 2;
      }
      return 0;
    }
    if (adv_demo->parsed()) {
      write_json(out, io::to_json(shinv_nonpreservation_demo(n_max)));
      return 0;
    }
    if (selftest->parsed()) {
      const auto s = covering_selftest(seed, count);
      json j = io::envelope("selftest");
      j["seed"] = seed;
      j["instances"] = s.instances;
      j["valid"] = s.valid;
      j["rejected"] = s.rejected;
      j["mismatches"] = s.mismatches;
      write_json(out, j);
      return s.mismatches == 0 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace natdens::cli
