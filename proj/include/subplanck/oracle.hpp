#pragma once

// Brute-force matrix references. Nothing here calls the closed forms in hw,
// su2 or specfn; states enter only through their labels and weights.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subplanck/half_int.hpp"
#include "subplanck/hw.hpp"
#include "subplanck/su2.hpp"

namespace subplanck::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// exp(G) for anti-Hermitian G via the Hermitian eigendecomposition of iG.
inline Matrix exp_antihermitian(const Matrix& g) {
  const Matrix h = cplx(0.0, 1.0) * g;
  const Matrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  const auto& lam = es.eigenvalues();
  Vector phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) phases[i] = std::polar(1.0, -lam[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// SU(2)

/// Spin matrices in the basis |j, mu>, ascending mu.
struct JMatrices {
  Matrix j1, j2, j3, raise, lower;
};

inline JMatrices j_matrices(HalfInt j) {
  if (j.twice() < 0) throw std::invalid_argument("j_matrices: negative j");
  const int d = j.dim();
  JMatrices m;
  m.lower = Matrix::Zero(d, d);
  m.j3 = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double mu = -j.value() + i;
    m.j3(i, i) = mu;
    // J_- |j,mu> = sqrt((j+mu)(j-mu+1)) |j,mu-1>
    if (i > 0) m.lower(i - 1, i) = std::sqrt((j.value() + mu) * (j.value() - mu + 1.0));
  }
  m.raise = m.lower.adjoint();
  m.j1 = 0.5 * (m.raise + m.lower);
  m.j2 = cplx(0.0, -0.5) * (m.raise - m.lower);
  return m;
}

/// D(gamma) = exp(alpha J_- - alpha^* J_+), alpha = e^{i phi} theta / 2, gamma = e^{i phi} tan(theta/2).
inline Matrix displacement_matrix(HalfInt j, cplx gamma) {
  const auto m = j_matrices(j);
  const cplx alpha = gamma == cplx{} ? cplx{} : std::polar(std::atan(std::abs(gamma)), std::arg(gamma));
  return exp_antihermitian(alpha * m.lower - std::conj(alpha) * m.raise);
}

/// e^{i phi J3}
inline Matrix rotation_z(HalfInt j, double phi) {
  const auto m = j_matrices(j);
  return exp_antihermitian(cplx(0.0, phi) * m.j3);
}

inline Vector highest_weight(HalfInt j) {
  Vector v = Vector::Zero(j.dim());
  v[j.dim() - 1] = 1.0;
  return v;
}

/// Clebsch-Gordan table built from |J,J> states (Gram-Schmidt against higher J,
/// Condon-Shortley sign) and repeated lowering.
class CgTable {
 public:
  CgTable(HalfInt j1, HalfInt j2) : j1_(j1), j2_(j2) {
    if (j1.twice() < 0 || j2.twice() < 0) throw std::invalid_argument("cg_ladder_oracle: negative j");
    if (j1.twice() > 12 || j2.twice() > 12) throw std::invalid_argument("cg_ladder_oracle: 2j1, 2j2 <= 12 required");
    const int d1 = j1.dim(), d2 = j2.dim();
    const auto m1 = j_matrices(j1), m2 = j_matrices(j2);
    const Matrix id1 = Matrix::Identity(d1, d1), id2 = Matrix::Identity(d2, d2);
    const Matrix lower = kron(m1.lower, id2) + kron(id1, m2.lower);

    for (int tJ = j1.twice() + j2.twice(); tJ >= std::abs(j1.twice() - j2.twice()); tJ -= 2) {
      // |J,J> spans the complement of the higher-J states in the M = J subspace.
      // Project every basis vector of that subspace and keep the largest residual.
      Vector top;
      double best = -1.0;
      for (int a = 0; a < d1; ++a) {
        const int tm2 = tJ - (-j1.twice() + 2 * a);
        if (!is_projection_of(HalfInt::from_twice(tm2), j2)) continue;
        Vector v = Vector::Zero(d1 * d2);
        v[index(a, (tm2 + j2.twice()) / 2)] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& [key, vec] : states_)
            if (key.second == tJ) v -= vec * vec.dot(v);
        if (v.norm() > best) {
          best = v.norm();
          top = v;
        }
      }
      top /= top.norm();
      // Condon-Shortley: <j1, j1; j2, J - j1 | J, J> > 0.
      const int tm2 = tJ - j1.twice();
      const cplx lead = top[index(d1 - 1, (tm2 + j2.twice()) / 2)];
      if (lead.real() < 0.0) top = -top;
      states_[{tJ, tJ}] = top;

      Vector cur = top;
      for (int tM = tJ; tM > -tJ; tM -= 2) {
        Vector next = lower * cur;
        next /= next.norm();
        states_[{tJ, tM - 2}] = next;
        cur = next;
      }
    }
  }

  /// <j1,m1; j2,m2 | J,M>; zero outside the table.
  double operator()(HalfInt m1, HalfInt m2, HalfInt J, HalfInt M) const {
    if (!is_projection_of(m1, j1_) || !is_projection_of(m2, j2_)) return 0.0;
    if (m1.twice() + m2.twice() != M.twice()) return 0.0;
    const auto it = states_.find({J.twice(), M.twice()});
    if (it == states_.end()) return 0.0;
    return it->second[index((m1.twice() + j1_.twice()) / 2, (m2.twice() + j2_.twice()) / 2)].real();
  }

  HalfInt j1() const { return j1_; }
  HalfInt j2() const { return j2_; }

 private:
  static Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
  }
  int index(int a, int b) const { return a * j2_.dim() + b; }

  HalfInt j1_, j2_;
  std::map<std::pair<int, int>, Vector> states_;  // (2J, 2M) -> coefficients over |m1> (x) |m2>
};

inline CgTable cg_ladder_oracle(HalfInt j1, HalfInt j2) { return CgTable(j1, j2); }

/// Kernel weights from the ladder-built CG tables (2j <= 12).
inline std::vector<double> kernel_weights_oracle(HalfInt j) {
  std::vector<double> w(static_cast<std::size_t>(j.dim()), 0.0);
  for (int l = 0; l <= j.twice(); ++l) {
    const CgTable t(j, HalfInt::from_int(l));
    for (int i = 0; i < j.dim(); ++i) {
      const HalfInt mu = HalfInt::from_twice(-j.twice() + 2 * i);
      w[static_cast<std::size_t>(i)] += (2.0 * l + 1.0) / (j.twice() + 1.0) * t(mu, HalfInt{}, j, mu);
    }
  }
  return w;
}

/// Normalised density matrix of an SU(2) state built from D(gamma_n)|j,j>.
inline Matrix su2_density(const su2::State& state) {
  const int d = state.j.dim();
  Matrix rho = Matrix::Zero(d, d);
  double wsum = 0.0;
  for (const auto& c : state.spec.components()) {
    Vector v = Vector::Zero(d);
    for (const auto& t : c.pure) v += t.weight * (displacement_matrix(state.j, t.label.gamma) * highest_weight(state.j));
    const double n = v.squaredNorm();
    if (!(n > 0.0)) throw std::invalid_argument("su2_density: zero vector");
    rho += c.weight * v * v.adjoint() / n;
    wsum += c.weight;
  }
  return rho / wsum;
}

/// W(gamma) = tr{rho D(gamma) Delta D^dagger(gamma)} with Delta from the ladder CG tables.
class Su2WignerOracle {
 public:
  explicit Su2WignerOracle(HalfInt j) : j_(j) {
    const auto w = kernel_weights_oracle(j);
    kernel_ = Matrix::Zero(j.dim(), j.dim());
    for (int i = 0; i < j.dim(); ++i) kernel_(i, i) = w[static_cast<std::size_t>(i)];
  }

  double operator()(const Matrix& rho, cplx gamma) const {
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw std::invalid_argument("su2_wigner_oracle: tr(rho) != 1");
    const Matrix d = displacement_matrix(j_, gamma);
    const cplx w = (rho * d * kernel_ * d.adjoint()).trace();
    if (std::abs(w.imag()) > 1e-10) throw std::runtime_error("su2_wigner_oracle: complex result");
    return w.real();
  }

  const Matrix& kernel() const { return kernel_; }

 private:
  HalfInt j_;
  Matrix kernel_;
};

inline double su2_wigner_oracle(const Matrix& rho, HalfInt j, cplx gamma) { return Su2WignerOracle(j)(rho, gamma); }

/// tr{rho D rho D^dagger} / tr{rho^2}
inline double su2_overlap_oracle(const Matrix& rho, HalfInt j, cplx delta) {
  const Matrix d = displacement_matrix(j, delta);
  return (rho * d * rho * d.adjoint()).trace().real() / (rho * rho).trace().real();
}

// ---------------------------------------------------------------------------
// Heisenberg-Weyl in a truncated Fock space

/// Smallest cutoff accepted for a coherent amplitude of modulus a.
inline int fock_cutoff_rule(double a) { return static_cast<int>(std::ceil(a * a + 8.0 * a + 20.0)); }

class HwFockOracle {
 public:
  static constexpr double kMaxAmplitude = 6.0;

  HwFockOracle(const hw::State& state, int cutoff) : cutoff_(cutoff) {
    annihilation_ = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) annihilation_(n - 1, n) = std::sqrt(static_cast<double>(n));
    parity_ = Matrix::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n) parity_(n, n) = (n % 2 == 0) ? 1.0 : -1.0;

    rho_ = Matrix::Zero(cutoff, cutoff);
    double wsum = 0.0;
    for (const auto& c : state.components()) {
      Vector v = Vector::Zero(cutoff);
      for (const auto& t : c.pure) {
        require_amplitude(std::abs(t.label.alpha));
        v += t.weight * coherent_vector(t.label.alpha);
      }
      const double n = v.squaredNorm();
      if (!(n > 0.0)) throw std::invalid_argument("hw_fock_oracle: zero vector");
      rho_ += c.weight * v * v.adjoint() / n;
      wsum += c.weight;
      max_label_ = std::max(max_label_, max_abs_label(c.pure));
    }
    rho_ /= wsum;
  }

  /// exp(beta a^dagger - beta^* a), truncated.
  Matrix displacement(cplx beta) const {
    return exp_antihermitian(beta * annihilation_.adjoint() - std::conj(beta) * annihilation_);
  }

  Vector coherent_vector(cplx alpha) const {
    Vector vac = Vector::Zero(cutoff_);
    vac[0] = 1.0;
    return displacement(alpha) * vac;
  }

  /// W(x, p) = tr{rho D(beta) Pi D^dagger(beta)} / (2 pi), beta = (x + i p) / 2.
  double wigner(double x, double p) const {
    const cplx beta(0.5 * x, 0.5 * p);
    require_amplitude(max_label_ + std::abs(beta));
    const Matrix d = displacement(beta);
    const Matrix shifted = d.adjoint() * rho_ * d;
    check_leakage(shifted);
    return (shifted * parity_).trace().real() / (2.0 * std::numbers::pi);
  }

  /// tr{rho D rho D^dagger} / tr{rho^2}, delta in alpha units.
  double overlap(cplx delta) const {
    require_amplitude(max_label_ + std::abs(delta));
    const Matrix d = displacement(delta);
    const Matrix moved = d * rho_ * d.adjoint();
    check_leakage(moved);
    return (rho_ * moved).trace().real() / (rho_ * rho_).trace().real();
  }

  const Matrix& density() const { return rho_; }
  int cutoff() const { return cutoff_; }

 private:
  static double max_abs_label(const Superposition<hw::Label>& sup) {
    double m = 0.0;
    for (const auto& t : sup) m = std::max(m, std::abs(t.label.alpha));
    return m;
  }

  void require_amplitude(double a) const {
    if (a > kMaxAmplitude) throw std::invalid_argument("hw_fock_oracle: |alpha| > 6 unsupported");
    if (cutoff_ < fock_cutoff_rule(a))
      throw std::invalid_argument("hw_fock_oracle: cutoff " + std::to_string(cutoff_) + " below " +
                                  std::to_string(fock_cutoff_rule(a)) + " for |alpha| = " + std::to_string(a));
  }

  /// Population in the top eight levels must be negligible.
  void check_leakage(const Matrix& r) const {
    double top = 0.0;
    for (int n = std::max(0, cutoff_ - 8); n < cutoff_; ++n) top += std::abs(r(n, n));
    if (top > 1e-10) throw std::runtime_error("hw_fock_oracle: truncation leakage " + std::to_string(top));
  }

  int cutoff_;
  Matrix annihilation_;
  Matrix parity_;
  Matrix rho_;
  double max_label_ = 0.0;
};

inline HwFockOracle hw_fock_oracle(const hw::State& state, int cutoff) { return HwFockOracle(state, cutoff); }

}  // namespace subplanck::oracle
