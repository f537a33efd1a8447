#pragma once

// SU(2) coherent-state superpositions on the sphere, represented on the
// stereographic plane gamma = x + i p = e^{i phi} tan(theta / 2). The origin is
// the north pole |j,j>, the unit circle is the equator.
//
// Amplitude vectors are indexed by ascending mu: entry i <-> |j, -j + i>.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subplanck/errors.hpp"
#include "subplanck/grid.hpp"
#include "subplanck/half_int.hpp"
#include "subplanck/specfn.hpp"
#include "subplanck/state.hpp"

namespace subplanck::su2 {

struct SpherePoint {
  double theta = 0.0;
  double phi = 0.0;
};

inline SpherePoint stereographic_to_sphere(cplx gamma) {
  return {2.0 * std::atan(std::abs(gamma)), gamma == cplx{} ? 0.0 : std::arg(gamma)};
}

/// Inverse of stereographic_to_sphere; the south pole has no finite image.
inline cplx sphere_to_stereographic(SpherePoint s) {
  if (std::abs(s.theta - std::numbers::pi) < 1e-15) throw std::domain_error("south pole maps to infinity");
  return std::polar(std::tan(0.5 * s.theta), s.phi);
}

struct Label {
  cplx gamma;

  SpherePoint sphere() const { return stereographic_to_sphere(gamma); }
  bool on_equator(double tol = 1e-12) const { return std::abs(std::abs(gamma) - 1.0) < tol; }
};

// ---------------------------------------------------------------------------
// Displacement algebra

struct CompositionResult {
  cplx gamma3;
  double varphi = 0.0;
};

/// D(g1) D(g2) = D(gamma3) e^{i varphi J3} with gamma3 = (g1 + g2) / (1 - g1^* g2),
/// varphi = 2 arg(1 - g1^* g2).
inline CompositionResult compose(cplx g1, cplx g2) {
  const cplx den = 1.0 - std::conj(g1) * g2;
  if (std::abs(den) < 1e-12) throw std::domain_error("compose: antipodal displacements (1 - g1^* g2 = 0)");
  return {(g1 + g2) / den, 2.0 * std::arg(den)};
}

namespace detail {

/// [N^2 / R]^j for R > 0, evaluated as |N|^{2j} R^{-j} e^{i 2j arg N}.
inline cplx squared_power(cplx n, double r, HalfInt j) {
  if (j.twice() == 0) return 1.0;
  const double mag = std::abs(n);
  if (mag == 0.0) return 0.0;
  return std::polar(std::exp(j.twice() * std::log(mag) - j.value() * std::log(r)), j.twice() * std::arg(n));
}

}  // namespace detail

/// u_mu(gamma) = sqrt((2j)! / ((j+mu)! (j-mu)!)) gamma^{j-mu} / (1+|gamma|^2)^j.
inline std::vector<cplx> coherent_amplitudes(HalfInt j, cplx gamma) {
  const int tj = j.twice();
  std::vector<cplx> u(static_cast<std::size_t>(tj + 1), cplx{});
  const double ln_norm = -j.value() * std::log1p(std::norm(gamma));
  if (gamma == cplx{}) {
    u.back() = 1.0;
    return u;
  }
  const double ln_abs = std::log(std::abs(gamma));
  const double arg = std::arg(gamma);
  const double ln_2j = specfn::ln_factorial(tj);
  for (int k = 0; k <= tj; ++k) {  // k = j - mu
    const double ln_mag =
        0.5 * (ln_2j - specfn::ln_factorial(k) - specfn::ln_factorial(tj - k)) + k * ln_abs + ln_norm;
    u[static_cast<std::size_t>(tj - k)] = std::polar(std::exp(ln_mag), k * arg);
  }
  return u;
}

/// <g1|g2> = [(1 + g1^* g2)^2 / ((1+|g1|^2)(1+|g2|^2))]^j
inline cplx coherent_overlap(HalfInt j, cplx g1, cplx g2) {
  return detail::squared_power(1.0 + std::conj(g1) * g2, (1.0 + std::norm(g1)) * (1.0 + std::norm(g2)), j);
}

/// <g1|D(delta)|g2> = [(1 + g1^* delta + g1^* g2 - delta^* g2)^2 / ((1+|delta|^2)(1+|g1|^2)(1+|g2|^2))]^j
inline cplx displaced_matrix_element(HalfInt j, cplx g1, cplx delta, cplx g2) {
  const cplx n = 1.0 + std::conj(g1) * delta + std::conj(g1) * g2 - std::conj(delta) * g2;
  return detail::squared_power(n, (1.0 + std::norm(delta)) * (1.0 + std::norm(g1)) * (1.0 + std::norm(g2)), j);
}

/// Displaced reference amplitudes entering the Wigner cross terms:
/// D^dagger(gamma)|gamma_k> = e^{i j varphi_k} |gamma'_k>, with
/// varphi_k = 2 arg(1 + gamma^* gamma_k), gamma'_k = (gamma_k - gamma) / (1 + gamma^* gamma_k).
/// Multiplied out, entry mu = j - k is sqrt(C(2j, k)) A^k B^{2j-k} / S^j with A = gamma_k - gamma,
/// B = 1 + gamma^* gamma_k, S = |A|^2 + |B|^2, which stays finite when gamma is antipodal to gamma_k.
inline std::vector<cplx> displaced_reference(HalfInt j, cplx gamma_k, cplx gamma) {
  const int tj = j.twice();
  const cplx a = gamma_k - gamma, b = 1.0 + std::conj(gamma) * gamma_k;
  const double ln_s = std::log((1.0 + std::norm(gamma)) * (1.0 + std::norm(gamma_k)));
  std::vector<cplx> u(static_cast<std::size_t>(tj + 1), cplx{});
  const double la = std::log(std::abs(a)), lb = std::log(std::abs(b));
  const double pa = std::arg(a), pb = std::arg(b);
  const double ln_2j = specfn::ln_factorial(tj);
  for (int k = 0; k <= tj; ++k) {
    if ((k > 0 && a == cplx{}) || (k < tj && b == cplx{})) continue;
    const double ln_mag = 0.5 * (ln_2j - specfn::ln_factorial(k) - specfn::ln_factorial(tj - k)) +
                          (k > 0 ? k * la : 0.0) + (k < tj ? (tj - k) * lb : 0.0) - j.value() * ln_s;
    u[static_cast<std::size_t>(tj - k)] = std::polar(std::exp(ln_mag), k * pa + (tj - k) * pb);
  }
  return u;
}

/// W_{|gn><gm|}(gamma) = e^{i j (varphi_n - varphi_m)} sum_mu Delta_mu u_mu^*(gamma'_m) u_mu(gamma'_n).
inline cplx wigner_cross_term(const specfn::KernelWeights& kernel, cplx gn, cplx gm, cplx gamma) {
  const HalfInt j = kernel.j();
  const auto an = displaced_reference(j, gn, gamma);
  const auto am = displaced_reference(j, gm, gamma);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < an.size(); ++i) acc += kernel.weights()[i] * std::conj(am[i]) * an[i];
  return acc;
}

/// Group operations consumed by the generic state algorithms.
class Group {
 public:
  explicit Group(HalfInt j) : j_(j), kernel_(specfn::kernel_weights(j)) {}
  Group(HalfInt j, specfn::KernelWeights kernel) : j_(j), kernel_(std::move(kernel)) {}

  HalfInt j() const { return j_; }
  const specfn::KernelWeights& kernel() const { return kernel_; }

  cplx overlap(const Label& a, const Label& b) const { return coherent_overlap(j_, a.gamma, b.gamma); }
  cplx displaced(const Label& a, cplx delta, const Label& b) const {
    return displaced_matrix_element(j_, a.gamma, delta, b.gamma);
  }

  cplx superposition_wigner(const Superposition<Label>& sup, cplx gamma) const {
    std::vector<std::vector<cplx>> refs;
    refs.reserve(sup.size());
    for (const auto& t : sup) refs.push_back(displaced_reference(j_, t.label.gamma, gamma));
    const auto& w = kernel_.weights();
    cplx acc = 0.0;
    for (std::size_t n = 0; n < sup.size(); ++n) {
      for (std::size_t m = 0; m < sup.size(); ++m) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::conj(refs[m][i]) * refs[n][i];
        acc += sup[n].weight * std::conj(sup[m].weight) * s;
      }
    }
    return acc;
  }

 private:
  HalfInt j_;
  specfn::KernelWeights kernel_;
};

// ---------------------------------------------------------------------------
// States

struct State {
  HalfInt j;
  StateSpec<Label> spec;

  const std::string& name() const { return spec.name(); }
};

inline void require_spin(HalfInt j) {
  if (j.twice() < 1) throw ConfigError("SU(2) states need 2j >= 1");
}

inline State coherent(HalfInt j, cplx gamma) {
  if (j.twice() < 0) throw ConfigError("negative j");
  return {j, StateSpec<Label>::pure({{1.0, {gamma}}}, "coherent")};
}

/// |1> + |-1>
inline State cat_h(HalfInt j) {
  require_spin(j);
  auto s = StateSpec<Label>::pure({{1.0, {cplx(1.0, 0.0)}}, {1.0, {cplx(-1.0, 0.0)}}}, "cat_h");
  return {j, s.with_scale(j.value())};
}

/// |i> + |-i>
inline State cat_v(HalfInt j) {
  require_spin(j);
  auto s = StateSpec<Label>::pure({{1.0, {cplx(0.0, 1.0)}}, {1.0, {cplx(0.0, -1.0)}}}, "cat_v");
  return {j, s.with_scale(j.value())};
}

inline State compass(HalfInt j) {
  require_spin(j);
  auto s = StateSpec<Label>::pure(
      {{1.0, {cplx(1.0, 0.0)}}, {1.0, {cplx(-1.0, 0.0)}}, {1.0, {cplx(0.0, 1.0)}}, {1.0, {cplx(0.0, -1.0)}}}, "compass");
  return {j, s.with_scale(j.value())};
}

inline State cat_mixture(HalfInt j) {
  require_spin(j);
  auto s = StateSpec<Label>::mixture(
      {{1.0, cat_h(j).spec.components().front().pure}, {1.0, cat_v(j).spec.components().front().pure}},
      "cat_mixture");
  return {j, s.with_scale(j.value())};
}

// ---------------------------------------------------------------------------
// Evaluation

inline constexpr double kImagResidueTol = 1e-10;

/// Wigner function of a normalised state; the kernel and norms are computed once.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(State state) : state_(std::move(state)), group_(state_.j) {
    norms_ = component_norms(group_, state_.spec);
  }
  WignerEvaluator(State state, Group group) : state_(std::move(state)), group_(std::move(group)) {
    if (group_.j() != state_.j) throw std::invalid_argument("WignerEvaluator: group and state j differ");
    norms_ = component_norms(group_, state_.spec);
  }

  double operator()(cplx gamma) const { return wigner_value(group_, state_.spec, norms_, gamma, kImagResidueTol); }
  double operator()(double x, double p) const { return (*this)(cplx(x, p)); }

  const State& state() const { return state_; }
  const Group& group() const { return group_; }

 private:
  State state_;
  Group group_;
  std::vector<double> norms_;
};

inline double wigner_at(const State& state, cplx gamma) { return WignerEvaluator(state)(gamma); }

/// Wigner field over the stereographic plane (grid must avoid |gamma| = infinity).
inline Field wigner_general(const State& state, const Grid2D& grid, Normalization mode = Normalization::raw) {
  grid.validate();
  const WignerEvaluator w(state);
  Field f;
  f.grid = grid;
  f.group = "su2";
  f.state = state.name();
  f.scale = state.j.str();
  f.values = sample_grid(grid, [&](double x, double p) { return w(cplx(x, p)); });
  f.check_finite();
  if (mode == Normalization::max) f.normalize_to_max();
  return f;
}

/// F(delta) = tr{rho D rho D^dagger} / tr{rho^2} over displacements delta = delta_x + i delta_p.
class PlaneOverlap {
 public:
  explicit PlaneOverlap(State state) : state_(std::move(state)), group_(state_.j) {
    norms_ = component_norms(group_, state_.spec);
  }

  double operator()(cplx delta) const { return overlap_value(group_, state_.spec, norms_, delta); }
  double operator()(double dx, double dp) const { return (*this)(cplx(dx, dp)); }

  /// tr{rho_M D rho_M D^dagger} with rho_M = sum_k w_k |psi_k><psi_k| over normalised
  /// components and unnormalised weights, so that F(0) = sum_k w_k^2 for orthogonal parts.
  double unnormalized_mixture(cplx delta) const {
    const auto& comps = state_.spec.components();
    double acc = 0.0;
    for (std::size_t k = 0; k < comps.size(); ++k)
      for (std::size_t l = 0; l < comps.size(); ++l)
        acc += comps[k].weight * comps[l].weight *
               std::norm(transition(group_, comps[k].pure, delta, comps[l].pure)) / (norms_[k] * norms_[l]);
    return acc;
  }

  const State& state() const { return state_; }

 private:
  State state_;
  Group group_;
  std::vector<double> norms_;
};

inline double overlap(const State& state, cplx delta) { return PlaneOverlap(state)(delta); }

inline Field overlap_field(const State& state, const Grid2D& plane_grid) {
  const PlaneOverlap f(state);
  Field out;
  out.grid = plane_grid;
  out.group = "su2";
  out.state = state.name();
  out.scale = state.j.str();
  out.values = sample_grid(plane_grid, [&](double dx, double dp) { return f(cplx(dx, dp)); });
  out.check_finite();
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms for equatorial states, used as validators of the general path.

namespace closed {

/// cos of the angular distance between the sphere points of a and b.
inline double cos_angle(cplx a, cplx b) {
  const double near = std::norm(1.0 + std::conj(a) * b);
  const double far = std::norm(b - a);
  return (near - far) / (near + far);
}

/// Wigner function of the coherent state |gamma_c> (unnormalised operator = normalised state):
/// (2j)!/sqrt(2j+1) sum_l (2l+1) P_l(cos Theta) / sqrt((2j-l)! (2j+l+1)!).
inline double coherent_wigner(HalfInt j, cplx gamma_c, cplx gamma) {
  const int tj = j.twice();
  const double c = cos_angle(gamma_c, gamma);
  const double ln_pre = specfn::ln_factorial(tj) - 0.5 * std::log(tj + 1.0);
  double acc = 0.0;
  for (int l = 0; l <= tj; ++l) {
    const double ln_coef = ln_pre - 0.5 * (specfn::ln_factorial(tj - l) + specfn::ln_factorial(tj + l + 1));
    acc += (2.0 * l + 1.0) * std::exp(ln_coef) * specfn::legendre_p(l, c);
  }
  return acc;
}

/// W_{|+-1>}(gamma); sign = +1 or -1.
inline double coherent_wigner_pm1(HalfInt j, int sign, cplx gamma) {
  return coherent_wigner(j, cplx(sign >= 0 ? 1.0 : -1.0, 0.0), gamma);
}

/// Interference term of |1> + |-1>:
/// sqrt((4j+1)!/(2j+1)) cos(2j phibar) sin^{2j}(thetabar) / (4^j (2j)!),
/// phibar = arg((1 - gamma) / (1 + gamma)), tan(thetabar/2) = |(gamma - 1)/(gamma + 1)|.
inline double interference_h(HalfInt j, cplx gamma) {
  const int tj = j.twice();
  const double sin_theta = std::abs(gamma * gamma - 1.0) / (1.0 + std::norm(gamma));
  if (sin_theta == 0.0) return 0.0;
  const double ln_coef = 0.5 * (specfn::ln_factorial(2 * tj + 1) - std::log(tj + 1.0)) - j.value() * std::log(4.0) -
                         specfn::ln_factorial(tj);
  const double phibar = std::arg((1.0 - gamma) / (1.0 + gamma));
  return std::exp(ln_coef + tj * std::log(sin_theta)) * std::cos(tj * phibar);
}

/// I_V(x + i p) = I_H(p + i x).
inline double interference_v(HalfInt j, cplx gamma) { return interference_h(j, cplx(gamma.imag(), gamma.real())); }

/// W for the unnormalised operator (|1> + |-1>)(<1| + <-1|).
inline double cat_h_wigner(HalfInt j, cplx gamma) {
  return coherent_wigner_pm1(j, +1, gamma) + coherent_wigner_pm1(j, -1, gamma) + 2.0 * interference_h(j, gamma);
}

inline double cat_v_wigner(HalfInt j, cplx gamma) { return cat_h_wigner(j, cplx(gamma.imag(), gamma.real())); }

/// Central chessboard I_H + I_V of the compass state.
inline double compass_central(HalfInt j, cplx gamma) { return interference_h(j, gamma) + interference_v(j, gamma); }

namespace detail {

/// delta_a^{2j} / (1+|delta|^2)^j + ((1+delta_b^2)/(1+|delta|^2))^j cos(2j atan delta_b)
inline double cat_bracket(HalfInt j, double da, double db, double denom) {
  const int tj = j.twice();
  double first = 0.0;
  if (da != 0.0) {
    first = std::exp(tj * std::log(std::abs(da)) - j.value() * std::log(denom));
    if (da < 0.0 && tj % 2 == 1) first = -first;
  }
  const double second = std::exp(j.value() * (std::log1p(db * db) - std::log(denom))) * std::cos(tj * std::atan(db));
  return first + second;
}

}  // namespace detail

/// [delta_x^{2j} + (1+delta_p^2)^j cos(2j atan delta_p)]^2 / (1+|delta|^2)^{2j}
inline double cat_h_overlap(HalfInt j, cplx delta) {
  const double b = detail::cat_bracket(j, delta.real(), delta.imag(), 1.0 + std::norm(delta));
  return b * b;
}

inline double cat_v_overlap(HalfInt j, cplx delta) { return cat_h_overlap(j, cplx(delta.imag(), delta.real())); }

/// Compass overlap exactly as printed: sum_q [delta_q^{2j} + (1+delta_q^2)^j cos(2j atan delta_q)]
/// divided by 4 (1+|delta|^2)^{2j}.
inline double compass_overlap_printed(HalfInt j, cplx delta) {
  const double denom = 1.0 + std::norm(delta);
  double s = 0.0;
  for (double q : {delta.real(), delta.imag()}) s += detail::cat_bracket(j, q, q, denom);
  return s * std::exp(-j.value() * std::log(denom)) / 4.0;
}

/// Variant of the printed compass form with the bracket squared.
inline double compass_overlap_squared(HalfInt j, cplx delta) {
  const double denom = 1.0 + std::norm(delta);
  double s = 0.0;
  for (double q : {delta.real(), delta.imag()}) s += detail::cat_bracket(j, q, q, denom);
  return s * s / 4.0;
}

/// F_H + F_V, the small-displacement approximation of the unnormalised mixture overlap.
inline double mixture_overlap_approx(HalfInt j, cplx delta) { return cat_h_overlap(j, delta) + cat_v_overlap(j, delta); }

}  // namespace closed

// ---------------------------------------------------------------------------
// Sphere quadrature

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  GaussLegendre r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// ((2j+1)/4pi) * integral of W over the sphere; equals tr(rho) = 1 for a normalised state.
/// Gauss-Legendre in cos(theta) with 2j+2 nodes and a (4j+3)-point trapezoid in phi,
/// exact for the degree-2j harmonics of an SU(2) Wigner function.
template <class F>
double sphere_normalization(HalfInt j, F&& wigner_of_gamma) {
  const int n_theta = j.twice() + 2;
  const int n_phi = 2 * j.twice() + 3;
  const auto gl = gauss_legendre(n_theta);
  double acc = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(gl.nodes[static_cast<std::size_t>(i)]);
    double ring = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / n_phi;
      ring += wigner_of_gamma(sphere_to_stereographic({theta, phi}));
    }
    acc += gl.weights[static_cast<std::size_t>(i)] * ring * (2.0 * std::numbers::pi / n_phi);
  }
  return (j.twice() + 1.0) / (4.0 * std::numbers::pi) * acc;
}

}  // namespace subplanck::su2
