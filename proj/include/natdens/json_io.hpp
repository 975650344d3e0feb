#pragma once

// JSON encodings of reports and of covering instance files. Rationals appear
// as {"exact": "num/den", "decimal": <12 significant digits>}.

#include <string>
#include <vector>

#include "json.hpp"
#include "natdens/adversary.hpp"
#include "natdens/covering.hpp"
#include "natdens/density.hpp"
#include "natdens/fndsl.hpp"
#include "natdens/maps.hpp"
#include "natdens/registry.hpp"

namespace natdens::io {

using json = nlohmann::ordered_json;

inline json to_json(const rational& x) { return json{{"exact", x.str()}, {"decimal", x.decimal12()}}; }

inline json to_json(const interval& I) { return json::array({I.a(), I.b()}); }

inline json to_json(const std::vector<interval>& Js) {
  json out = json::array();
  for (const auto& J : Js) out.push_back(to_json(J));
  return out;
}

inline json to_json(const interval_union& u) { return to_json(u.parts()); }

inline json envelope(const char* kind) { return json{{"schema_version", 1}, {"kind", kind}}; }

inline json to_json(const thm1_report& r) {
  json j = envelope("thm1_report");
  j["D"] = to_json(r.D);
  j["m"] = to_json(r.m);
  j["epsilon"] = to_json(r.epsilon);
  j["N"] = r.N;
  j["scan_limit"] = r.scan_limit;
  j["mode"] = to_string(r.mode);
  j["intervals_checked"] = r.intervals_checked;
  j["worst_interval"] = to_json(r.worst_interval);
  j["worst_density"] = to_json(r.worst_density);
  j["worst_deviation"] = to_json(r.worst_deviation);
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const density_profile& p, const std::string& set_name, nat n_max) {
  json j = envelope("density_limits");
  j["set"] = set_name;
  j["n_max"] = n_max;
  j["tail_start"] = p.tail_start;
  j["limsup_est"] = to_json(p.limsup_est);
  j["liminf_est"] = to_json(p.liminf_est);
  json samples = json::array();
  for (const auto& s : p.samples) {
    samples.push_back(json{{"n", s.n}, {"density", to_json(s.density)}});
  }
  j["samples"] = std::move(samples);
  return j;
}

inline json to_json(const std::optional<collision>& c) {
  if (!c) return nullptr;
  return json{{"first", c->first}, {"second", c->second}, {"value", c->value}};
}

inline json to_json(const injectivity_report& r, const std::string& map_name) {
  json j = envelope("injectivity_report");
  j["map"] = map_name;
  j["window"] = to_json(r.window);
  j["ok"] = r.ok;
  j["collision"] = to_json(r.found);
  return j;
}

inline json to_json(const dsl::check_report& r, const std::string& file) {
  json j = envelope("dsl_check_report");
  j["file"] = file;
  j["window"] = to_json(r.window);
  j["total"] = r.total;
  j["first_uncovered"] = r.first_uncovered ? json(*r.first_uncovered) : json(nullptr);
  j["first_failure"] =
      r.first_failure ? json{{"k", r.first_failure->k}, {"message", r.first_failure->message}} : json(nullptr);
  j["injective"] = r.injective;
  j["collision"] = to_json(r.found);
  return j;
}

inline json instance_to_json(const covering_instance& inst) {
  return json{{"map", inst.f ? inst.f->name() : ""}, {"p", inst.p.str()}, {"q", inst.q.str()}, {"r", inst.r.str()},
              {"m", inst.m.str()}, {"I", to_json(inst.I)}, {"Js", to_json(inst.Js)}};
}

namespace detail {

inline rational rational_field(const json& j, const char* key) {
  if (!j.contains(key)) throw error(std::string("instance is missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_string()) return rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return rational(v.get<std::int64_t>());
  if (v.is_number_float()) {
    // decimals are read through their shortest text form to stay exact
    return rational::parse(v.dump());
  }
  throw error(std::string("field '") + key + "' must be a rational string or number");
}

inline interval interval_field(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
    throw error("intervals must be [a,b] with natural endpoints");
  }
  return interval(v[0].get<nat>(), v[1].get<nat>());
}

}  // namespace detail

inline covering_instance instance_from_json(const json& j) {
  if (!j.is_object()) throw error("instance must be a JSON object");
  covering_instance inst;
  if (!j.contains("map") || !j["map"].is_string()) throw error("instance is missing field 'map'");
  inst.f = resolve_map(j["map"].get<std::string>());
  inst.p = detail::rational_field(j, "p");
  inst.q = detail::rational_field(j, "q");
  inst.r = detail::rational_field(j, "r");
  inst.m = detail::rational_field(j, "m");
  if (!j.contains("I")) throw error("instance is missing field 'I'");
  inst.I = detail::interval_field(j["I"]);
  if (!j.contains("Js") || !j["Js"].is_array()) throw error("instance is missing field 'Js'");
  for (const auto& v : j["Js"]) inst.Js.push_back(detail::interval_field(v));
  return inst;
}

inline covering_instance load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw error("cannot parse '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

/// Instance files may hold one instance or an array of them.
inline std::vector<covering_instance> load_instances(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw error("cannot parse '" + path + "': " + e.what());
  }
  std::vector<covering_instance> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(instance_from_json(item));
  } else {
    out.push_back(instance_from_json(j));
  }
  return out;
}

inline json to_json(const covering_instance& inst, const covering_report& r) {
  json j = envelope("covering_report");
  j["instance"] = instance_to_json(inst);
  json per = json::array();
  for (std::size_t i = 0; i < inst.Js.size(); ++i) {
    per.push_back(json{{"J", to_json(inst.Js[i])}, {"hits", r.hits[i]}, {"inclusion", to_json(r.inclusion[i])},
                       {"in_C", r.inclusion[i] >= inst.q}});
  }
  j["intervals"] = std::move(per);
  j["C"] = to_json(r.C);
  j["T_union"] = to_json(r.T_union);
  j["fT_in_I"] = r.fT_in_I;
  j["I_size"] = inst.I.size();
  j["omission"] = to_json(r.omission);
  j["condition_holds"] = r.condition_holds;
  return j;
}

inline json to_json(const shuffle_covering& c, const interval& I, const rational& p, const rational& r) {
  json j = envelope("shuffle_covering");
  j["I"] = to_json(I);
  j["p"] = to_json(p);
  j["r"] = to_json(r);
  j["p_prime"] = to_json(c.p_prime);
  j["m"] = to_json(c.m);
  json comps = json::array();
  for (const auto& comp : c.components) {
    comps.push_back(json{{"part", to_json(comp.part)}, {"mu", to_json(comp.mu)}, {"kept", comp.kept},
                         {"covered", comp.covered}, {"uncovered", comp.uncovered}});
  }
  j["components"] = std::move(comps);
  j["Js"] = to_json(c.Js);
  j["uncovered"] = c.uncovered;
  j["omission"] = to_json(c.omission);
  j["omission_below_r"] = c.omission < r;
  return j;
}

inline json to_json(const search_result& s) {
  json j = envelope("violation_search");
  j["examined"] = s.examined;
  j["found"] = s.witness.has_value();
  if (s.witness) {
    j["witness"] = instance_to_json(*s.witness);
    j["omission"] = to_json(s.report->omission);
  } else {
    j["note"] = "no violation found within budget";
  }
  return j;
}

inline json to_json(const adversary_report& r) {
  json j = envelope("adversary_report");
  j["q"] = to_json(r.q);
  j["r"] = to_json(r.r);
  j["D"] = to_json(r.D);
  j["window_cap"] = r.window_cap;
  j["stages_requested"] = r.stages_requested;
  j["stages_completed"] = r.stages.size();
  j["truncated"] = r.truncated;
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back(json{{"k", s.k},
                          {"L_prev", s.L_prev},
                          {"M", s.M},
                          {"N", s.N},
                          {"L", s.L},
                          {"I", to_json(s.I)},
                          {"covering_size", s.covering_size},
                          {"constrained", s.constrained},
                          {"image_hits", s.image_hits},
                          {"image_density", to_json(s.image_density)},
                          {"image_bound", to_json(s.image_bound)},
                          {"image_below_bound", s.image_density < s.image_bound},
                          {"max_deviation", to_json(s.max_deviation)},
                          {"deviation_bound", to_json(s.deviation_bound)},
                          {"deviation_below_bound", s.max_deviation < s.deviation_bound}});
  }
  j["stages"] = std::move(stages);
  j["final_density"] = to_json(r.final_density);
  return j;
}

inline json to_json(const nonpreservation_demo& d) {
  json j = envelope("shinv_nonpreservation_demo");
  j["n_max"] = d.n_max;
  j["evens_density"] = to_json(d.evens_density);
  j["image_set"] = "{2} u [2^i, (3/2)2^i - 1], i >= 2";
  j["brute_force_window"] = d.brute_force_window;
  j["matches_brute_force"] = d.matches_brute_force;
  j["limsup_est"] = to_json(d.image_profile.limsup_est);
  j["liminf_est"] = to_json(d.image_profile.liminf_est);
  json cps = json::array();
  for (const auto& c : d.checkpoints) cps.push_back(json{{"n", c.n}, {"density", to_json(c.density)}});
  j["checkpoints"] = std::move(cps);
  return j;
}

}  // namespace natdens::io
