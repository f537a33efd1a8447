#pragma once

// Overlap zero scans, central-tile geometry and power-law fits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "subplanck/errors.hpp"
#include "subplanck/grid.hpp"
#include "subplanck/hw.hpp"
#include "subplanck/su2.hpp"

namespace subplanck::analysis {

/// F over the displacement plane, (delta_x, delta_p) -> F.
using PlaneFunction = std::function<double(double, double)>;

struct DirectionScan {
  double direction = 0.0;
  std::optional<double> min_zero;                 // magnitude of the first zero
  std::optional<double> value_at_zero;            // F there
  std::optional<std::pair<double, double>> bracket;  // sampled interval holding the zero
  std::vector<std::pair<double, double>> samples;    // (magnitude, F)
};

/// Values of a normalised overlap indistinguishable from zero in double precision.
inline constexpr double kNoiseFloor = 1e-14;

struct ScanOptions {
  int samples = 4000;
  double tol = 1e-6;
};

namespace detail {

/// Golden-section minimisation on [a, b]; used to polish Brent below its sqrt(eps) limit.
template <class F>
double golden_min(F&& f, double a, double b, double xtol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Walks the ray delta = r e^{i direction}, r in [0, max_radius], and reports the
/// first r where F drops below tol. Each sampled dip is refined by minimising sqrt(F).
inline DirectionScan zero_scan(const PlaneFunction& f, double direction, double max_radius, ScanOptions opt = {}) {
  if (!(opt.tol > 0.0 && opt.tol <= 1e-3)) throw std::invalid_argument("zero_scan: tol must lie in (0, 1e-3]");
  if (!(max_radius > 0.0) || opt.samples < 3) throw std::invalid_argument("zero_scan: bad radius or sample count");
  const double c = std::cos(direction), s = std::sin(direction);
  auto along = [&](double r) { return std::max(0.0, f(r * c, r * s)); };

  DirectionScan out;
  out.direction = direction;
  out.samples.reserve(static_cast<std::size_t>(opt.samples) + 1);
  for (int i = 0; i <= opt.samples; ++i) {
    const double r = max_radius * i / opt.samples;
    out.samples.emplace_back(r, along(r));
  }

  const auto& v = out.samples;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i].second <= v[i - 1].second && v[i].second <= v[i + 1].second)) continue;
    if (v[i].second >= 0.5) continue;  // shallow wiggle, not a dip
    const double lo = v[i - 1].first, hi = v[i + 1].first;
    auto root = [&](double r) { return std::sqrt(along(r)); };
    const auto br = boost::math::tools::brent_find_minima(root, lo, hi, std::numeric_limits<double>::digits / 2);
    const double w = 64.0 * std::ldexp(std::max(1.0, std::abs(br.first)), -std::numeric_limits<double>::digits / 2);
    double r0 = detail::golden_min(root, std::max(lo, br.first - w), std::min(hi, br.first + w), 1e-15);
    // Degenerate zeros (crossing zero lines) leave F at round-off over a finite window;
    // centre on that window, bisecting each edge.
    if (along(r0) <= kNoiseFloor) {
      auto edge = [&](double inside, double outside) {
        if (along(outside) <= kNoiseFloor) return outside;
        for (int it = 0; it < 200 && std::abs(outside - inside) > 1e-15; ++it) {
          const double mid = 0.5 * (inside + outside);
          (along(mid) <= kNoiseFloor ? inside : outside) = mid;
        }
        return inside;
      };
      r0 = 0.5 * (edge(r0, lo) + edge(r0, hi));
    }
    const double fr = along(r0);
    if (fr < opt.tol) {
      out.min_zero = r0;
      out.value_at_zero = fr;
      out.bracket = std::make_pair(lo, hi);
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tile geometry

struct TileReport {
  double extent_x = 0.0;  // full width of the central cell along x
  double extent_p = 0.0;
  double area = 0.0;
  double plus_x = 0.0, minus_x = 0.0, plus_p = 0.0, minus_p = 0.0;  // distances from the origin
};

namespace detail {

/// Distance from the origin to the first zero of g(t), t >= 0, sampled with step h up
/// to t_max: a sign change (linear interpolation) or a near-zero local minimum of |g|
/// (parabolic vertex).
template <class G>
std::optional<double> first_boundary(G&& g, double h, double t_max) {
  const double g0 = g(0.0);
  if (g0 == 0.0) return std::nullopt;
  const int n = static_cast<int>(std::floor(t_max / h + 1e-9));
  double prev = g0, prev_abs = std::abs(g0);
  for (int k = 1; k <= n; ++k) {
    const double t = k * h;
    const double cur = g(t);
    if ((cur > 0.0) != (g0 > 0.0) || cur == 0.0) {
      return t - h * cur / (cur - prev);
    }
    if (k < n) {
      const double next = g(t + h);
      const double a = std::abs(cur), an = std::abs(next);
      if (a <= prev_abs && a <= an && a < 0.05 * std::abs(g0) && (next > 0.0) == (g0 > 0.0)) {
        const double den = prev_abs - 2.0 * a + an;
        const double shift = den > 0.0 ? 0.5 * h * (prev_abs - an) / den : 0.0;
        return t + shift;
      }
    }
    prev = cur;
    prev_abs = std::abs(cur);
  }
  return std::nullopt;
}

}  // namespace detail

/// Central chessboard cell of a field whose grid contains the origin.
inline TileReport tile_geometry(const Field& field) {
  const auto& g = field.grid;
  g.validate();
  if (!(g.x.min <= 0.0 && g.x.max >= 0.0 && g.p.min <= 0.0 && g.p.max >= 0.0))
    throw std::invalid_argument("tile_geometry: grid does not contain the origin");
  auto boundary = [&](double ux, double up, double h, double limit) {
    auto along = [&](double t) { return field.interpolate(ux * t, up * t); };
    auto b = detail::first_boundary(along, h, limit);
    if (!b) throw NumericError("tile_geometry: no zero crossing found (not a chessboard field)");
    return *b;
  };
  TileReport r;
  r.plus_x = boundary(1, 0, g.x.step(), g.x.max);
  r.minus_x = boundary(-1, 0, g.x.step(), -g.x.min);
  r.plus_p = boundary(0, 1, g.p.step(), g.p.max);
  r.minus_p = boundary(0, -1, g.p.step(), -g.p.min);
  r.extent_x = r.plus_x + r.minus_x;
  r.extent_p = r.plus_p + r.minus_p;
  r.area = r.extent_x * r.extent_p;
  return r;
}

// ---------------------------------------------------------------------------
// Power laws

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // ln prefactor
  double r2 = 0.0;
};

/// Least squares of ln(quantity) against ln(scale).
inline ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [s, q] : points) {
    if (!(s > 0.0) || !(q > 0.0)) throw std::invalid_argument("scaling_fit: inputs must be positive");
    xs.push_back(std::log(s));
    ys.push_back(std::log(q));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double vx = 0, vy = 0, cxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vx += (xs[i] - mx) * (xs[i] - mx);
    vy += (ys[i] - my) * (ys[i] - my);
    cxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(vx > 1e-300)) throw std::invalid_argument("scaling_fit: scales must differ");
  ScalingFit fit;
  fit.exponent = cxy / vx;
  fit.intercept = my - fit.exponent * mx;
  fit.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

// ---------------------------------------------------------------------------
// State families and reports

enum class GroupKind { hw, su2 };
enum class Family { cat, compass, mixture };

inline std::string to_string(GroupKind g) { return g == GroupKind::hw ? "hw" : "su2"; }
inline std::string to_string(Family f) {
  switch (f) {
    case Family::cat: return "cat";
    case Family::compass: return "compass";
    default: return "mixture";
  }
}

inline Family parse_family(const std::string& s) {
  if (s == "cat" || s == "cat_h") return Family::cat;
  if (s == "compass") return Family::compass;
  if (s == "mixture" || s == "cat_mixture") return Family::mixture;
  throw ConfigError("unknown state family '" + s + "' (cat, compass, mixture)");
}

/// Scale as used by the family constructors: x0 for HW, j (rounded to the nearest half-integer) for SU(2).
inline HalfInt spin_from_scale(double scale) { return HalfInt::from_twice(static_cast<int>(std::lround(2.0 * scale))); }

inline hw::State hw_family_state(Family f, double x0) {
  switch (f) {
    case Family::cat: return hw::cat_h(x0);
    case Family::compass: return hw::compass(x0);
    default: return hw::cat_mixture(x0);
  }
}

inline su2::State su2_family_state(Family f, HalfInt j) {
  switch (f) {
    case Family::cat: return su2::cat_h(j);
    case Family::compass: return su2::compass(j);
    default: return su2::cat_mixture(j);
  }
}

/// F over plane displacements: HW in (delta_x, delta_p), SU(2) in gamma = delta_x + i delta_p.
inline PlaneFunction family_overlap(GroupKind g, Family f, double scale) {
  if (g == GroupKind::hw) {
    auto ov = std::make_shared<hw::PlaneOverlap>(hw_family_state(f, scale));
    return [ov](double dx, double dp) { return (*ov)(dx, dp); };
  }
  auto ov = std::make_shared<su2::PlaneOverlap>(su2_family_state(f, spin_from_scale(scale)));
  return [ov](double dx, double dp) { return (*ov)(dx, dp); };
}

/// Natural scan radius: 4 pi / x0 (HW plane units) or pi / j (SU(2)).
inline double default_scan_radius(GroupKind g, double scale) {
  return g == GroupKind::hw ? 4.0 * std::numbers::pi / scale : std::numbers::pi / scale;
}

inline const std::vector<double>& default_directions() {
  static const std::vector<double> d{0.0, std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4};
  return d;
}

struct EnhancementRow {
  double scale = 0.0;
  double direction = 0.0;
  std::optional<double> min_zero;
  std::optional<double> scaled;  // min_zero * scale
};

struct DirectionSummary {
  double direction = 0.0;
  int scales_with_zero = 0;
  bool zeros_at_all_scales = false;
  std::optional<double> spread;  // max/min - 1 of scaled zeros, when zeros exist at every scale
  bool constant = false;         // spread <= 10%
};

struct EnhancementReport {
  GroupKind group = GroupKind::hw;
  Family family = Family::cat;
  std::vector<double> scales;
  std::vector<double> directions;
  std::vector<EnhancementRow> rows;
  std::vector<DirectionSummary> summary;
};

inline constexpr double kConstancyTolerance = 0.10;

inline EnhancementReport enhancement_report(GroupKind g, Family f, const std::vector<double>& scales,
                                            std::vector<double> directions = default_directions(),
                                            ScanOptions opt = {}) {
  if (scales.empty()) throw std::invalid_argument("enhancement_report: no scales");
  EnhancementReport rep;
  rep.group = g;
  rep.family = f;
  rep.scales = scales;
  rep.directions = std::move(directions);
  for (double s : scales) {
    const auto fn = family_overlap(g, f, s);
    for (double d : rep.directions) {
      const auto scan = zero_scan(fn, d, default_scan_radius(g, s), opt);
      EnhancementRow row{s, d, scan.min_zero, std::nullopt};
      if (scan.min_zero) row.scaled = *scan.min_zero * s;
      rep.rows.push_back(row);
    }
  }
  for (double d : rep.directions) {
    DirectionSummary sum;
    sum.direction = d;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : rep.rows) {
      if (row.direction != d || !row.scaled) continue;
      ++sum.scales_with_zero;
      lo = std::min(lo, *row.scaled);
      hi = std::max(hi, *row.scaled);
    }
    sum.zeros_at_all_scales = sum.scales_with_zero == static_cast<int>(scales.size());
    if (sum.zeros_at_all_scales) {
      sum.spread = hi / lo - 1.0;
      sum.constant = *sum.spread <= kConstancyTolerance;
    }
    rep.summary.push_back(sum);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tile scaling of the compass chessboard

struct TileSample {
  double scale = 0.0;
  TileReport tile;
};

/// Central window resolving the compass tile: half-width 2 pi / x0 (HW) or pi / (2 j) (SU(2)).
inline Grid2D tile_window(GroupKind g, double scale, int count = 201) {
  const double h = g == GroupKind::hw ? 2.0 * std::numbers::pi / scale : 0.5 * std::numbers::pi / scale;
  return Grid2D::square(h, count);
}

inline Field family_wigner(GroupKind g, Family f, double scale, const Grid2D& grid) {
  if (g == GroupKind::hw) return hw::wigner(hw_family_state(f, scale), grid);
  return su2::wigner_general(su2_family_state(f, spin_from_scale(scale)), grid);
}

/// Central tile of the chessboard of a compass or mixture state.
inline TileSample family_tile(GroupKind g, Family f, double scale, int count = 201) {
  if (f == Family::cat) throw std::invalid_argument("family_tile: cat states have no chessboard");
  return {scale, tile_geometry(family_wigner(g, f, scale, tile_window(g, scale, count)))};
}

}  // namespace subplanck::analysis
