#pragma once

// Scene configuration, custom state files, and CSV / JSON emission.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "subplanck/errors.hpp"
#include "subplanck/grid.hpp"
#include "subplanck/half_int.hpp"
#include "subplanck/hw.hpp"
#include "subplanck/su2.hpp"

namespace subplanck::io {

using json = nlohmann::json;

inline constexpr int kMinGridCount = 16;

// ---------------------------------------------------------------------------
// Grid strings "xmin:xmax:n,pmin:pmax:n"

inline Axis parse_axis(const std::string& text, const std::string& field) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError(field + ": expected min:max:count, got '" + text + "'");
  Axis a;
  try {
    std::size_t used = 0;
    a.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("trailing");
    a.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
    a.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw ConfigError(field + ": malformed axis '" + text + "'");
  }
  return a;
}

inline Grid2D parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("grid: expected 'xmin:xmax:n,pmin:pmax:n'");
  return {parse_axis(text.substr(0, comma), "grid.x"), parse_axis(text.substr(comma + 1), "grid.p")};
}

inline std::string format_grid(const Grid2D& g) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g:%d,%.17g:%.17g:%d", g.x.min, g.x.max, g.x.count, g.p.min, g.p.max,
                g.p.count);
  return buf;
}

// ---------------------------------------------------------------------------
// Custom states
//
// {"kind": "pure", "terms": [{"weight": [re, im], "label": [re, im]}, ...]}
// {"kind": "mixture", "components": [{"weight": w, "terms": [...]}, ...]}

struct CustomTerm {
  cplx weight;
  cplx label;
};

struct CustomComponent {
  double weight = 1.0;
  std::vector<CustomTerm> terms;
};

struct CustomState {
  bool pure = true;
  std::vector<CustomComponent> components;
};

namespace detail {

inline cplx parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(field + ": expected a number or [re, im]");
}

inline std::vector<CustomTerm> parse_terms(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field + ": expected a non-empty array of terms");
  std::vector<CustomTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("label")) throw ConfigError(f + ": term needs a 'label'");
    CustomTerm t;
    t.weight = j[i].contains("weight") ? parse_complex(j[i]["weight"], f + ".weight") : cplx(1.0, 0.0);
    t.label = parse_complex(j[i]["label"], f + ".label");
    if (!std::isfinite(t.label.real()) || !std::isfinite(t.label.imag())) throw ConfigError(f + ".label: not finite");
    if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag())) throw ConfigError(f + ".weight: not finite");
    out.push_back(t);
  }
  return out;
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

inline CustomState parse_custom_state(const json& j) {
  if (!j.is_object()) throw ConfigError("state: expected an object");
  const std::string kind = j.value("kind", "pure");
  CustomState s;
  if (kind == "pure") {
    s.components.push_back({1.0, detail::parse_terms(j.value("terms", json()), "state.terms")});
  } else if (kind == "mixture") {
    s.pure = false;
    const json comps = j.value("components", json());
    if (!comps.is_array() || comps.empty()) throw ConfigError("state.components: expected a non-empty array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string f = "state.components[" + std::to_string(i) + "]";
      const double w = comps[i].value("weight", 1.0);
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError(f + ".weight: must be finite and >= 0");
      s.components.push_back({w, detail::parse_terms(comps[i].value("terms", json()), f + ".terms")});
    }
  } else {
    throw ConfigError("state.kind: expected 'pure' or 'mixture', got '" + kind + "'");
  }
  return s;
}

inline json to_json(const CustomState& s) {
  auto terms_json = [](const std::vector<CustomTerm>& ts) {
    json a = json::array();
    for (const auto& t : ts) a.push_back({{"weight", detail::complex_json(t.weight)}, {"label", detail::complex_json(t.label)}});
    return a;
  };
  if (s.pure) return {{"kind", "pure"}, {"terms", terms_json(s.components.front().terms)}};
  json comps = json::array();
  for (const auto& c : s.components) comps.push_back({{"weight", c.weight}, {"terms", terms_json(c.terms)}});
  return {{"kind", "mixture"}, {"components", comps}};
}

template <class Label, class MakeLabel>
StateSpec<Label> build_custom(const CustomState& s, MakeLabel make) {
  std::vector<MixtureComponent<Label>> comps;
  for (const auto& c : s.components) {
    Superposition<Label> sup;
    for (const auto& t : c.terms) sup.push_back({t.weight, make(t.label)});
    comps.push_back({c.weight, std::move(sup)});
  }
  if (s.pure) return StateSpec<Label>::pure(std::move(comps.front().pure), "custom");
  return StateSpec<Label>::mixture(std::move(comps), "custom");
}

// ---------------------------------------------------------------------------
// Scene configuration

struct SceneConfig {
  std::string group;  // "hw" or "su2"
  std::optional<double> x0;
  std::optional<HalfInt> j;
  std::string state = "compass";
  std::optional<CustomState> custom;
  std::optional<Grid2D> grid;
  Normalization normalization = Normalization::raw;
  std::string out;
  std::string format = "csv";
};

inline const std::vector<std::string>& named_states() {
  static const std::vector<std::string> names{"coherent", "cat_h", "cat_v", "compass", "cat_mixture", "mixture"};
  return names;
}

inline bool is_named_state(const std::string& s) {
  for (const auto& n : named_states())
    if (n == s) return true;
  return false;
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "max") return Normalization::max;
  if (s == "raw") return Normalization::raw;
  throw ConfigError("normalization: expected 'max' or 'raw', got '" + s + "'");
}

inline HalfInt parse_spin(const json& v) {
  try {
    if (v.is_string()) return HalfInt::parse(v.get<std::string>());
    if (v.is_number()) {
      const double d = v.get<double>();
      const double twice = 2.0 * d;
      if (std::abs(twice - std::round(twice)) > 1e-12) throw std::invalid_argument("not a half-integer");
      return HalfInt::from_twice(static_cast<int>(std::lround(twice)));
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("j: expected an integer or half-integer (n or n/2)");
}

inline CustomState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("state: cannot open state file '" + path + "'");
  try {
    return parse_custom_state(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("state: invalid JSON in '" + path + "': " + e.what());
  }
}

/// Sets `state` from a name or a path to a custom state file.
inline void set_state(SceneConfig& c, const std::string& value) {
  if (is_named_state(value)) {
    c.state = value == "mixture" ? "cat_mixture" : value;
    c.custom.reset();
    return;
  }
  if (std::filesystem::exists(value)) {
    c.state = "custom";
    c.custom = load_state_file(value);
    return;
  }
  throw ConfigError("state: unknown state '" + value + "' and no such file");
}

/// Applies the keys of a JSON config object on top of `c`.
inline void apply_json(SceneConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::vector<std::string> known{"group", "x0", "j", "state", "grid", "normalization", "normalize", "out", "format"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw ConfigError("config: unknown field '" + key + "'");
  }
  try {
    if (j.contains("group")) c.group = j["group"].get<std::string>();
    if (j.contains("x0")) c.x0 = j["x0"].get<double>();
    if (j.contains("j")) c.j = parse_spin(j["j"]);
    if (j.contains("state")) {
      if (j["state"].is_string()) set_state(c, j["state"].get<std::string>());
      else {
        c.state = "custom";
        c.custom = parse_custom_state(j["state"]);
      }
    }
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      if (g.is_string()) c.grid = parse_grid(g.get<std::string>());
      else if (g.is_object() && g.contains("x") && g.contains("p")) {
        auto axis = [](const json& a, const std::string& f) {
          if (!a.is_array() || a.size() != 3) throw ConfigError(f + ": expected [min, max, count]");
          return Axis{a[0].get<double>(), a[1].get<double>(), a[2].get<int>()};
        };
        c.grid = Grid2D{axis(g["x"], "grid.x"), axis(g["p"], "grid.p")};
      } else {
        throw ConfigError("grid: expected a string or {x: [..], p: [..]}");
      }
    }
    for (const char* key : {"normalization", "normalize"})
      if (j.contains(key)) c.normalization = parse_normalization(j[key].get<std::string>());
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: wrong value type: ") + e.what());
  }
}

inline SceneConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  SceneConfig c;
  try {
    apply_json(c, json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config: invalid JSON: " + std::string(e.what()));
  }
  return c;
}

/// Checks the invariants that do not depend on the subcommand.
inline void validate(const SceneConfig& c, bool need_grid) {
  if (c.group != "hw" && c.group != "su2") throw ConfigError("group: expected 'hw' or 'su2', got '" + c.group + "'");
  if (c.group == "hw") {
    if (c.j) throw ConfigError("j: not a parameter of the hw group (use x0)");
    const bool needs_x0 = c.state != "custom" && c.state != "coherent";
    if (needs_x0 && !c.x0) throw ConfigError("x0: required for hw state '" + c.state + "'");
    if (c.x0 && !(*c.x0 > 0.0 && std::isfinite(*c.x0))) throw ConfigError("x0: must be positive and finite");
  } else {
    if (c.x0) throw ConfigError("x0: not a parameter of the su2 group (use j)");
    if (!c.j) throw ConfigError("j: required for the su2 group");
    if (c.j->twice() < 1) throw ConfigError("j: must be at least 1/2");
  }
  if (c.format != "csv") throw ConfigError("format: only 'csv' is supported");
  if (need_grid && c.grid) {
    for (const Axis* a : {&c.grid->x, &c.grid->p}) {
      if (a->count < kMinGridCount) throw ConfigError("grid: counts must be >= " + std::to_string(kMinGridCount));
      if (!(a->max > a->min) || !std::isfinite(a->min) || !std::isfinite(a->max))
        throw ConfigError("grid: need finite min < max");
    }
  }
  if (c.state == "custom" && !c.custom) throw ConfigError("state: custom state without terms");
}

inline hw::State make_hw_state(const SceneConfig& c) {
  if (c.state == "custom") return build_custom<hw::Label>(*c.custom, [](cplx z) { return hw::Label{z}; });
  if (c.state == "coherent") return hw::coherent(cplx{});
  const double x0 = *c.x0;
  if (c.state == "cat_h") return hw::cat_h(x0);
  if (c.state == "cat_v") return hw::cat_v(x0);
  if (c.state == "compass") return hw::compass(x0);
  return hw::cat_mixture(x0);
}

inline su2::State make_su2_state(const SceneConfig& c) {
  const HalfInt j = *c.j;
  if (c.state == "custom") return {j, build_custom<su2::Label>(*c.custom, [](cplx z) { return su2::Label{z}; })};
  if (c.state == "coherent") return su2::coherent(j, cplx{});
  if (c.state == "cat_h") return su2::cat_h(j);
  if (c.state == "cat_v") return su2::cat_v(j);
  if (c.state == "compass") return su2::compass(j);
  return su2::cat_mixture(j);
}

inline std::string scale_string(const SceneConfig& c) {
  if (c.group == "su2") return c.j ? c.j->str() : "";
  if (!c.x0) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", *c.x0);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header "x,p,value", then one row per node with p as the outer loop.
inline void write_csv(std::ostream& os, const Field& f) {
  os << "x,p,value\n";
  for (int ip = 0; ip < f.grid.p.count; ++ip) {
    const std::string p = format_double(f.grid.p.at(ip));
    for (int ix = 0; ix < f.grid.x.count; ++ix)
      os << format_double(f.grid.x.at(ix)) << ',' << p << ',' << format_double(f.at(ix, ip)) << '\n';
  }
}

/// Inverse of write_csv; recovers grid extents, counts and values exactly.
inline Field read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,p,value") throw ConfigError("csv: missing 'x,p,value' header");
  std::vector<double> xs, ps, vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double t[3];
    std::stringstream ss(line);
    std::string cell;
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(ss, cell, ',')) throw ConfigError("csv: short row '" + line + "'");
      char* end = nullptr;
      t[k] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw ConfigError("csv: bad number '" + cell + "'");
    }
    xs.push_back(t[0]);
    ps.push_back(t[1]);
    vals.push_back(t[2]);
  }
  if (vals.empty()) throw ConfigError("csv: no data rows");
  int nx = 1;
  while (nx < static_cast<int>(ps.size()) && ps[static_cast<std::size_t>(nx)] == ps[0]) ++nx;
  if (vals.size() % static_cast<std::size_t>(nx) != 0) throw ConfigError("csv: ragged grid");
  const int np = static_cast<int>(vals.size()) / nx;
  Field f;
  f.grid = {{xs.front(), xs[static_cast<std::size_t>(nx - 1)], nx}, {ps.front(), ps.back(), np}};
  f.values = std::move(vals);
  return f;
}

inline json sidecar(const Field& f, const std::string& axis_unit = "") {
  json j{{"group", f.group},
         {"scale", f.scale},
         {"state", f.state},
         {"grid",
          {{"x", {f.grid.x.min, f.grid.x.max, f.grid.x.count}}, {"p", {f.grid.p.min, f.grid.p.max, f.grid.p.count}}}},
         {"normalization", to_string(f.normalization)},
         {"field_max", f.max()},
         {"field_min", f.min()}};
  if (!axis_unit.empty()) j["axis_unit"] = axis_unit;
  return j;
}

/// Writes <out> (CSV) and <out>.json (sidecar).
inline void write_field(const std::string& out, const Field& f, const std::string& axis_unit = "") {
  std::ofstream csv(out);
  if (!csv) throw ConfigError("out: cannot write '" + out + "'");
  write_csv(csv, f);
  std::ofstream meta(out + ".json");
  if (!meta) throw ConfigError("out: cannot write '" + out + ".json'");
  meta << sidecar(f, axis_unit).dump(2) << '\n';
}

}  // namespace subplanck::io
