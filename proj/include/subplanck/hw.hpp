#pragma once

// Heisenberg-Weyl coherent-state superpositions.
//
// Phase-space coordinates are the quadratures x = a + a^dagger, p = i(a^dagger - a),
// so a coherent amplitude alpha sits at r = (x, p) = 2 (Re alpha, Im alpha).
// Displacements are given either as delta_alpha (alpha units) or as plane
// coordinates (delta_x, delta_p) with delta_alpha = (delta_x + i delta_p) / 2.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "subplanck/errors.hpp"
#include "subplanck/grid.hpp"
#include "subplanck/state.hpp"

namespace subplanck::hw {

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

struct Label {
  cplx alpha;

  PhasePoint point() const { return {2.0 * alpha.real(), 2.0 * alpha.imag()}; }
  /// Mean quantum number of the coherent state.
  double mean_number() const { return std::norm(alpha); }
};

using State = StateSpec<Label>;

/// <a|b> = exp(-i Im{a b^*} - |a - b|^2 / 2).
inline cplx coherent_overlap(cplx a, cplx b) {
  return std::exp(cplx(-0.5 * std::norm(a - b), -(a * std::conj(b)).imag()));
}

/// Wigner function of the operator |alpha_n><alpha_m| at r = (x, p).
inline cplx wigner_cross_term(const Label& n, const Label& m, PhasePoint r) {
  const PhasePoint rn = n.point(), rm = m.point();
  const double cx = r.x - 0.5 * (rn.x + rm.x);
  const double cp = r.p - 0.5 * (rn.p + rm.p);
  // u^T Omega v with Omega = ((0, 1), (-1, 0)).
  auto symplectic = [](double ux, double up, double vx, double vp) { return ux * vp - up * vx; };
  const double phase = -0.5 * symplectic(rn.x - rm.x, rn.p - rm.p, r.x, r.p) + 0.25 * symplectic(rn.x, rn.p, rm.x, rm.p);
  return std::polar(std::exp(-0.5 * (cx * cx + cp * cp)) / (2.0 * std::numbers::pi), phase);
}

/// Group operations consumed by the generic state algorithms.
struct Group {
  cplx overlap(const Label& a, const Label& b) const { return coherent_overlap(a.alpha, b.alpha); }

  /// <a|D(delta)|b> using D(delta)|b> = exp(i Im{delta b^*}) |delta + b>.
  cplx displaced(const Label& a, cplx delta, const Label& b) const {
    return std::polar(1.0, (delta * std::conj(b.alpha)).imag()) * coherent_overlap(a.alpha, delta + b.alpha);
  }

  cplx superposition_wigner(const Superposition<Label>& sup, PhasePoint r) const {
    cplx acc = 0.0;
    for (const auto& n : sup)
      for (const auto& m : sup) acc += n.weight * std::conj(m.weight) * wigner_cross_term(n.label, m.label, r);
    return acc;
  }
};

// ---------------------------------------------------------------------------
// Named states. Normalisation is never assumed.

inline State coherent(cplx alpha) { return State::pure({{1.0, {alpha}}}, "coherent"); }

inline void require_positive_x0(double x0) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw ConfigError("x0 must be a positive finite number");
}

/// |x0/2> + |-x0/2>
inline State cat_h(double x0) {
  require_positive_x0(x0);
  auto s = State::pure({{1.0, {cplx(0.5 * x0, 0.0)}}, {1.0, {cplx(-0.5 * x0, 0.0)}}}, "cat_h");
  return s.with_scale(x0);
}

/// |i x0/2> + |-i x0/2>, the pi/2 rotation of cat_h.
inline State cat_v(double x0) {
  require_positive_x0(x0);
  auto s = State::pure({{1.0, {cplx(0.0, 0.5 * x0)}}, {1.0, {cplx(0.0, -0.5 * x0)}}}, "cat_v");
  return s.with_scale(x0);
}

inline State compass(double x0) {
  require_positive_x0(x0);
  Superposition<Label> terms = cat_h(x0).components().front().pure;
  const State v = cat_v(x0);
  for (const auto& t : v.components().front().pure) terms.push_back(t);
  auto s = State::pure(std::move(terms), "compass");
  return s.with_scale(x0);
}

/// |psi_H><psi_H| + |psi_V><psi_V| with each cat normalised.
inline State cat_mixture(double x0) {
  require_positive_x0(x0);
  auto s = State::mixture({{1.0, cat_h(x0).components().front().pure}, {1.0, cat_v(x0).components().front().pure}},
                          "cat_mixture");
  return s.with_scale(x0);
}

// ---------------------------------------------------------------------------
// Evaluation

inline constexpr double kImagResidueTol = 1e-12;

/// Wigner function of the normalised state at (x, p).
inline double wigner_at(const State& state, double x, double p) {
  const Group g;
  return wigner_value(g, state, component_norms(g, state), PhasePoint{x, p}, kImagResidueTol);
}

inline Field wigner(const State& state, const Grid2D& grid, Normalization mode = Normalization::raw) {
  grid.validate();
  const Group g;
  const auto norms = component_norms(g, state);
  Field f;
  f.grid = grid;
  f.group = "hw";
  f.state = state.name();
  if (state.scale()) f.scale = std::to_string(*state.scale());
  f.values = sample_grid(grid, [&](double x, double p) {
    return wigner_value(g, state, norms, PhasePoint{x, p}, kImagResidueTol);
  });
  f.check_finite();
  if (mode == Normalization::max) f.normalize_to_max();
  return f;
}

/// F(delta_alpha) = tr{rho D rho D^dagger} / tr{rho^2}.
inline double overlap(const State& state, cplx delta_alpha) {
  const Group g;
  return overlap_value(g, state, component_norms(g, state), delta_alpha);
}

/// F at plane displacement (delta_x, delta_p), i.e. delta_alpha = (delta_x + i delta_p) / 2.
inline double overlap_plane(const State& state, double dx, double dp) { return overlap(state, cplx(0.5 * dx, 0.5 * dp)); }

/// Reusable evaluator over plane displacements; norms are computed once.
class PlaneOverlap {
 public:
  explicit PlaneOverlap(State state) : state_(std::move(state)), norms_(component_norms(Group{}, state_)) {}
  double operator()(double dx, double dp) const { return overlap_value(Group{}, state_, norms_, cplx(0.5 * dx, 0.5 * dp)); }
  const State& state() const { return state_; }

 private:
  State state_;
  std::vector<double> norms_;
};

inline Field overlap_field(const State& state, const Grid2D& plane_grid) {
  const PlaneOverlap f(state);
  Field out;
  out.grid = plane_grid;
  out.group = "hw";
  out.state = state.name();
  if (state.scale()) out.scale = std::to_string(*state.scale());
  out.values = sample_grid(plane_grid, f);
  out.check_finite();
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms for the named states. Wigner forms are unnormalised and omit
// the 1/(2 pi) prefactor; overlaps are normalised so that F(0) = 1 up to the
// exponentially small coherent-state overlaps they neglect.

namespace closed {

inline double double_peak(double x, double x0) {
  return std::exp(-0.5 * (x - x0) * (x - x0)) + std::exp(-0.5 * (x + x0) * (x + x0));
}

/// e^{-p^2/2} [V(x;x0) + 2 e^{-x^2/2} cos(x0 p)]
inline double cat_h_wigner(double x0, double x, double p) {
  return std::exp(-0.5 * p * p) * (double_peak(x, x0) + 2.0 * std::exp(-0.5 * x * x) * std::cos(x0 * p));
}

/// Factor c with cat_h_wigner = c * wigner_at(cat_h(x0), .) exactly.
inline double cat_h_scale(double x0) { return 2.0 * std::numbers::pi * (2.0 + 2.0 * std::exp(-0.5 * x0 * x0)); }

inline double compass_coherent_part(double x0, double x, double p) {
  return std::exp(-0.5 * p * p) * double_peak(x, x0) + std::exp(-0.5 * x * x) * double_peak(p, x0);
}

inline double compass_central_part(double x0, double x, double p) {
  return std::exp(-0.5 * (x * x + p * p)) * (std::cos(x0 * p) + std::cos(x0 * x));
}

inline double compass_outer_interference(double x0, double x, double p) {
  auto g = [x0](double u, double v) {
    const double h = 0.5 * x0;
    return std::exp(-0.5 * ((u - h) * (u - h) + (v - h) * (v - h))) * std::cos(h * (u + v - h));
  };
  return g(x, p) + g(-x, p) + g(x, -p) + g(-x, -p);
}

/// W_coh + 2 W_cent + 2 W_int
inline double compass_wigner(double x0, double x, double p) {
  return compass_coherent_part(x0, x, p) + 2.0 * compass_central_part(x0, x, p) +
         2.0 * compass_outer_interference(x0, x, p);
}

/// W_coh + 2 W_cent
inline double mixture_wigner(double x0, double x, double p) {
  return compass_coherent_part(x0, x, p) + 2.0 * compass_central_part(x0, x, p);
}

inline double coherent_overlap_f(double dx, double dp) { return std::exp(-0.25 * (dx * dx + dp * dp)); }

/// (1/2) e^{-|da|^2} [1 + cos(x0 dp)]
inline double cat_h_overlap(double x0, double dx, double dp) {
  return 0.5 * coherent_overlap_f(dx, dp) * (1.0 + std::cos(x0 * dp));
}

/// (1/4) e^{-|da|^2} [cos(x0 dx/2) + cos(x0 dp/2)]^2
inline double compass_overlap(double x0, double dx, double dp) {
  const double s = std::cos(0.5 * x0 * dx) + std::cos(0.5 * x0 * dp);
  return 0.25 * coherent_overlap_f(dx, dp) * s * s;
}

/// Same as compass_overlap written as a product over delta_+ and delta_-.
inline double compass_overlap_product(double x0, double dx, double dp) {
  const double a = std::cos(0.25 * x0 * (dx + dp));
  const double b = std::cos(0.25 * x0 * (dx - dp));
  return coherent_overlap_f(dx, dp) * a * a * b * b;
}

/// (1/4) e^{-|da|^2} [2 + cos(x0 dx) + cos(x0 dp)]
inline double mixture_overlap(double x0, double dx, double dp) {
  return 0.25 * coherent_overlap_f(dx, dp) * (2.0 + std::cos(x0 * dx) + std::cos(x0 * dp));
}

}  // namespace closed

}  // namespace subplanck::hw
