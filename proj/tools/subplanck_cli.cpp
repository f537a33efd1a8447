// subplanck: Wigner fields, displacement overlaps, scaling reports and validation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subplanck/analysis.hpp"
#include "subplanck/errors.hpp"
#include "subplanck/hw.hpp"
#include "subplanck/io.hpp"
#include "subplanck/su2.hpp"
#include "subplanck/validate.hpp"

namespace {

using namespace subplanck;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidation = 4;

struct SceneFlags {
  std::string config;
  std::string group;
  std::optional<double> x0;
  std::string j;
  std::string state;
  std::string grid;
  std::string normalize;
  std::string out;
  std::string format;
};

void add_scene_flags(CLI::App* cmd, SceneFlags& f) {
  cmd->add_option("--config", f.config, "JSON scene file; flags override its fields");
  cmd->add_option("--group", f.group, "hw or su2");
  cmd->add_option("--x0", f.x0, "cat separation (hw)");
  cmd->add_option("--j", f.j, "spin, n or n/2 (su2)");
  cmd->add_option("--state", f.state, "coherent, cat_h, cat_v, compass, cat_mixture, or a JSON state file");
  cmd->add_option("--grid", f.grid, "xmin:xmax:n,pmin:pmax:n");
  cmd->add_option("--normalize", f.normalize, "max or raw");
  cmd->add_option("--out", f.out, "output CSV path; the sidecar goes to <out>.json");
  cmd->add_option("--format", f.format, "csv");
}

io::SceneConfig resolve(const SceneFlags& f, const std::string& default_out) {
  io::SceneConfig c = f.config.empty() ? io::SceneConfig{} : io::load_config_file(f.config);
  if (!f.group.empty()) c.group = f.group;
  if (f.x0) c.x0 = *f.x0;
  if (!f.j.empty()) c.j = io::parse_spin(json(f.j));
  if (!f.state.empty()) io::set_state(c, f.state);
  if (!f.grid.empty()) c.grid = io::parse_grid(f.grid);
  if (!f.normalize.empty()) c.normalization = io::parse_normalization(f.normalize);
  if (!f.out.empty()) c.out = f.out;
  if (!f.format.empty()) c.format = f.format;
  if (c.out.empty()) c.out = default_out;
  if (c.group.empty()) throw ConfigError("group: required (hw or su2)");
  return c;
}

Grid2D default_wigner_grid(const io::SceneConfig& c) {
  if (c.group == "su2") return Grid2D::square(2.0, 401);
  return Grid2D::square(c.x0 ? 1.5 * *c.x0 : 8.0, 401);
}

/// Length of one overlap axis unit: pi/x0 (hw) or pi/(4j) (su2).
double overlap_unit(const io::SceneConfig& c) {
  if (c.group == "su2") return std::numbers::pi / (4.0 * c.j->value());
  return c.x0 ? std::numbers::pi / *c.x0 : 1.0;
}

std::string overlap_unit_name(const io::SceneConfig& c) {
  if (c.group == "su2") return "pi/(4j)";
  return c.x0 ? "pi/x0" : "1";
}

int cmd_wigner(const SceneFlags& flags) {
  auto c = resolve(flags, "wigner.csv");
  io::validate(c, true);
  const Grid2D grid = c.grid.value_or(default_wigner_grid(c));
  Field f = c.group == "hw" ? hw::wigner(io::make_hw_state(c), grid, c.normalization)
                            : su2::wigner_general(io::make_su2_state(c), grid, c.normalization);
  f.scale = io::scale_string(c);
  io::write_field(c.out, f);
  return kExitOk;
}

int cmd_overlap(const SceneFlags& flags, bool scan, int scan_samples) {
  auto c = resolve(flags, scan ? "overlap_scan.csv" : "overlap.csv");
  io::validate(c, !scan);
  const double unit = overlap_unit(c);

  analysis::PlaneFunction fn;
  std::string state_name;
  if (c.group == "hw") {
    auto ov = std::make_shared<hw::PlaneOverlap>(io::make_hw_state(c));
    state_name = ov->state().name();
    fn = [ov](double dx, double dp) { return (*ov)(dx, dp); };
  } else {
    auto ov = std::make_shared<su2::PlaneOverlap>(io::make_su2_state(c));
    state_name = ov->state().name();
    fn = [ov](double dx, double dp) { return (*ov)(dx, dp); };
  }

  if (scan) {
    const double radius = c.group == "hw" ? 4.0 * unit * (c.x0 ? 1.0 : std::numbers::pi) : 4.0 * unit;
    std::ofstream os(c.out);
    if (!os) throw ConfigError("out: cannot write '" + c.out + "'");
    os << "direction,min_zero,min_zero_axis_units,value_at_zero\n";
    json rows = json::array();
    for (double d : analysis::default_directions()) {
      analysis::ScanOptions opt;
      opt.samples = scan_samples;
      const auto s = analysis::zero_scan(fn, d, radius, opt);
      os << io::format_double(d) << ',';
      if (s.min_zero)
        os << io::format_double(*s.min_zero) << ',' << io::format_double(*s.min_zero / unit) << ','
           << io::format_double(*s.value_at_zero) << '\n';
      else
        os << "none,none,none\n";
      rows.push_back({{"direction", d}, {"min_zero", s.min_zero ? json(*s.min_zero) : json(nullptr)}});
    }
    std::ofstream meta(c.out + ".json");
    meta << json{{"group", c.group},     {"scale", io::scale_string(c)},       {"state", state_name},
                 {"max_radius", radius}, {"axis_unit", overlap_unit_name(c)}, {"scans", rows}}
                .dump(2)
         << '\n';
    return kExitOk;
  }

  const Grid2D grid = c.grid.value_or(Grid2D::square(3.0, 121));
  Field f;
  f.grid = grid;
  f.group = c.group;
  f.state = state_name;
  f.scale = io::scale_string(c);
  f.values = sample_grid(grid, [&](double u, double v) { return fn(u * unit, v * unit); });
  f.check_finite();
  if (c.normalization == Normalization::max) f.normalize_to_max();
  io::write_field(c.out, f, overlap_unit_name(c));
  return kExitOk;
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument("bad");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError("scales: expected a comma-separated list of positive numbers, got '" + text + "'");
    }
  }
  if (out.size() < 3) throw ConfigError("scales: need at least 3 values for a fit");
  return out;
}

int cmd_scaling(const std::string& group, const std::string& family_name, const std::string& scales_text,
                const std::string& out) {
  if (group != "hw" && group != "su2") throw ConfigError("group: expected 'hw' or 'su2', got '" + group + "'");
  const auto g = group == "hw" ? analysis::GroupKind::hw : analysis::GroupKind::su2;
  const auto fam = analysis::parse_family(family_name);
  const auto scales = parse_scales(scales_text);
  if (g == analysis::GroupKind::su2)
    for (double s : scales)
      if (std::abs(2.0 * s - std::round(2.0 * s)) > 1e-12) throw ConfigError("scales: su2 scales must be half-integers");

  const auto rep = analysis::enhancement_report(g, fam, scales);
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"scale", r.scale},
                    {"direction", r.direction},
                    {"min_zero", r.min_zero ? json(*r.min_zero) : json(nullptr)},
                    {"min_zero_times_scale", r.scaled ? json(*r.scaled) : json(nullptr)}});
  json summary = json::array();
  for (const auto& s : rep.summary)
    summary.push_back({{"direction", s.direction},
                       {"scales_with_zero", s.scales_with_zero},
                       {"spread", s.spread ? json(*s.spread) : json(nullptr)},
                       {"constant_within_10pct", s.constant}});

  json report{{"group", group}, {"family", analysis::to_string(fam)}, {"scales", scales},
              {"enhancement", rows}, {"directions", summary}};
  if (fam != analysis::Family::cat) {
    json tiles = json::array();
    std::vector<std::pair<double, double>> areas, extents;
    for (double s : scales) {
      const auto t = analysis::family_tile(g, fam, s);
      tiles.push_back({{"scale", s}, {"extent_x", t.tile.extent_x}, {"extent_p", t.tile.extent_p}, {"area", t.tile.area}});
      areas.emplace_back(s, t.tile.area);
      extents.emplace_back(s, 0.5 * (t.tile.extent_x + t.tile.extent_p));
    }
    const auto fa = analysis::scaling_fit(areas);
    const auto fe = analysis::scaling_fit(extents);
    report["tiles"] = tiles;
    report["tile_area_fit"] = {{"exponent", fa.exponent}, {"r2", fa.r2}};
    report["tile_extent_fit"] = {{"exponent", fe.exponent}, {"r2", fe.r2}};
  }
  std::ofstream os(out);
  if (!os) throw ConfigError("out: cannot write '" + out + "'");
  os << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& level) {
  if (level != "quick" && level != "full") throw ConfigError("level: expected 'quick' or 'full'");
  const auto rep = validation::run_suite(level == "full" ? validation::Level::full : validation::Level::quick);
  for (const auto& c : rep.checks)
    std::printf("%s  %-72s worst=%.3e tol=%.1e (%.2fs)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                c.tolerance, c.seconds);
  return rep.all_passed() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner fields and displacement overlaps of coherent-state superpositions"};
  app.require_subcommand(1);

  SceneFlags wflags, oflags;
  auto* wig = app.add_subcommand("wigner", "Wigner field on a grid (CSV + JSON sidecar)");
  add_scene_flags(wig, wflags);

  auto* ovl = app.add_subcommand("overlap", "Displacement overlap F on a grid, or zero scans with --scan");
  add_scene_flags(ovl, oflags);
  bool scan = false;
  int scan_samples = 4000;
  ovl->add_flag("--scan", scan, "scan rays at 0, pi/4, pi/2, 3pi/4 for the first zero");
  ovl->add_option("--scan-samples", scan_samples, "samples per ray")->check(CLI::Range(16, 1000000));

  auto* scl = app.add_subcommand("scaling", "Zero-scan enhancement table and tile fits over a list of scales");
  std::string s_group, s_family = "compass", s_scales, s_out = "scaling.json";
  scl->add_option("--group", s_group, "hw or su2")->required();
  scl->add_option("--state", s_family, "cat, compass or mixture");
  scl->add_option("--scales", s_scales, "comma-separated x0 or j values")->required();
  scl->add_option("--out", s_out, "report path (JSON)");

  auto* val = app.add_subcommand("validate", "Oracle-equivalence and invariant checks");
  std::string level = "quick";
  val->add_option("level,--level", level, "quick or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*wig) return cmd_wigner(wflags);
    if (*ovl) return cmd_overlap(oflags, scan, scan_samples);
    if (*scl) return cmd_scaling(s_group, s_family, s_scales, s_out);
    if (*val) return cmd_validate(level);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
