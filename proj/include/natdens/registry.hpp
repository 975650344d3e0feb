#pragma once

// Named sets and maps as accepted on the command line and in instance files.
//
// Sets:  evens | odds | multiples:K | nodensity | interval-union:A-B,C-D,...
//        | dsl-image:FILE:BASESET | bits:FILE
// Maps:  sh | sh-inv | identity | path to a .dsl file

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "natdens/adversary.hpp"
#include "natdens/fndsl.hpp"
#include "natdens/maps.hpp"
#include "natdens/natset.hpp"

namespace natdens {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses a positive decimal natural; 0 and junk are rejected.
inline nat parse_nat(std::string_view s, const char* what = "value") {
  if (s.empty()) throw error(std::string(what) + ": empty number");
  nat v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw error(std::string(what) + ": not a natural number: '" + std::string(s) + "'");
    v = checked_add(checked_mul(v, 10), static_cast<nat>(c - '0'));
  }
  if (v == 0) throw error(std::string(what) + ": 0 is not a natural number");
  return v;
}

/// "lo:hi" or "lo-hi".
inline interval parse_interval(std::string_view s) {
  auto sep = s.find(':');
  if (sep == std::string_view::npos) sep = s.find('-');
  if (sep == std::string_view::npos) throw error("expected an interval 'lo:hi', got '" + std::string(s) + "'");
  return interval(parse_nat(s.substr(0, sep), "interval"), parse_nat(s.substr(sep + 1), "interval"));
}

inline map_ptr resolve_map(const std::string& name) {
  if (name == "sh") return make_sh();
  if (name == "sh-inv" || name == "sh_inv") return make_sh_inv();
  if (name == "identity" || name == "id") return make_identity();
  return std::make_shared<dsl::dsl_map>(dsl::parse(read_text_file(name), name), name);
}

/// bits file: one member per line, '#' comments, optional "# window LO:HI"
/// header. Without a header the window is [1, largest member].
inline std::shared_ptr<bit_window_set> load_bits(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::optional<interval> window;
  std::vector<nat> members;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view tag = "# window ";
      if (line.rfind(tag, 0) == 0) window = parse_interval(std::string_view(line).substr(tag.size()));
      continue;
    }
    members.push_back(parse_nat(line, "bits member"));
  }
  if (!window) {
    if (members.empty()) throw error("bits file '" + path + "' has no members and no window header");
    window = interval(1, *std::max_element(members.begin(), members.end()));
  }
  auto set = std::make_shared<bit_window_set>("bits:" + path, *window);
  for (nat n : members) set->insert(n);
  set->seal();
  return set;
}

inline void save_bits(const bit_window_set& S, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write '" + path + "'");
  out << "# window " << S.window().a() << ":" << S.window().b() << "\n";
  for (nat n : S.members()) out << n << "\n";
}

struct set_options {
  std::optional<interval> image_window;  // window for dsl-image sets
  std::optional<nat> scan_bound;         // domain scan bound for dsl-image sets
};

inline set_ptr parse_set(const std::string& spec, const set_options& opts = {}) {
  if (spec == "evens") return evens();
  if (spec == "odds") return odds();
  if (spec == "nodensity") return no_density_example();
  if (spec == "all") return all_naturals();
  if (spec == "empty") return empty_set();
  auto starts = [&](std::string_view p) { return spec.rfind(p, 0) == 0; };
  if (starts("multiples:")) return multiples_of(parse_nat(std::string_view(spec).substr(10), "multiples"));
  if (starts("interval-union:")) {
    interval_union u;
    std::string_view rest = std::string_view(spec).substr(15);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      u.add(parse_interval(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (u.empty()) throw error("interval-union needs at least one interval");
    return std::make_shared<interval_union_set>(spec, std::move(u));
  }
  if (starts("bits:")) return load_bits(spec.substr(5));
  if (starts("dsl-image:")) {
    const std::string rest = spec.substr(10);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw error("dsl-image needs FILE:BASESET");
    const auto f = resolve_map(rest.substr(0, colon));
    const auto base = parse_set(rest.substr(colon + 1), opts);
    if (!opts.image_window) throw error("dsl-image sets need a materialization window");
    return image_on_window(*f, *base, *opts.image_window, opts.scan_bound);
  }
  throw error("unknown set '" + spec + "'");
}

}  // namespace natdens
