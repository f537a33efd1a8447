#pragma once

// Oracle-equivalence and invariant suites behind `subplanck validate`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "subplanck/hw.hpp"
#include "subplanck/oracle.hpp"
#include "subplanck/specfn.hpp"
#include "subplanck/su2.hpp"

namespace subplanck::validation {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst error observed
  double tolerance = 0.0;
  double seconds = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

enum class Level { quick, full };

namespace detail {

inline void run(Report& rep, const std::string& name, double tol, const std::function<double()>& worst) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r{name, false, 0.0, tol, 0.0};
  try {
    r.measured = worst();
    r.passed = std::isfinite(r.measured) && r.measured <= tol;
  } catch (const std::exception&) {
    r.measured = INFINITY;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.checks.push_back(r);
}

inline cplx random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

inline su2::State random_su2_state(std::mt19937_64& rng, HalfInt j, int terms) {
  Superposition<su2::Label> sup;
  for (int t = 0; t < terms; ++t) sup.push_back({random_complex(rng, 1.0), {random_complex(rng, 1.5)}});
  return {j, StateSpec<su2::Label>::pure(std::move(sup), "random")};
}

inline double max_abs(const oracle::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace detail

inline Report run_suite(Level level) {
  Report rep;
  std::mt19937_64 rng(20240611);

  detail::run(rep, "clebsch_gordan vs ladder oracle (2j <= 4)", 1e-12, [] {
    double worst = 0.0;
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; b <= 4; ++b) {
        const HalfInt j1 = HalfInt::from_twice(a), j2 = HalfInt::from_twice(b);
        const auto table = oracle::cg_ladder_oracle(j1, j2);
        for (int tJ = std::abs(a - b); tJ <= a + b; tJ += 2)
          for (int m1 = -a; m1 <= a; m1 += 2)
            for (int m2 = -b; m2 <= b; m2 += 2) {
              const HalfInt J = HalfInt::from_twice(tJ), M = HalfInt::from_twice(m1 + m2);
              const HalfInt hm1 = HalfInt::from_twice(m1), hm2 = HalfInt::from_twice(m2);
              worst = std::max(worst, std::abs(specfn::clebsch_gordan(j1, hm1, j2, hm2, J, M) - table(hm1, hm2, J, M)));
            }
      }
    return worst;
  });

  detail::run(rep, "kernel weights vs ladder oracle, trace = 1 (2j <= 4)", 1e-12, [] {
    double worst = 0.0;
    for (int tj = 0; tj <= 4; ++tj) {
      const HalfInt j = HalfInt::from_twice(tj);
      const auto k = specfn::kernel_weights(j);
      const auto o = oracle::kernel_weights_oracle(j);
      for (std::size_t i = 0; i < o.size(); ++i) worst = std::max(worst, std::abs(k.weights()[i] - o[i]));
      worst = std::max(worst, std::abs(k.sum() - 1.0));
    }
    return worst;
  });

  detail::run(rep, "spin matrices: commutator and Casimir (2j <= 4)", 1e-12, [] {
    double worst = 0.0;
    for (int tj = 1; tj <= 4; ++tj) {
      const HalfInt j = HalfInt::from_twice(tj);
      const auto m = oracle::j_matrices(j);
      worst = std::max(worst, detail::max_abs(m.j1 * m.j2 - m.j2 * m.j1 - cplx(0, 1) * m.j3));
      const oracle::Matrix cas = m.j1 * m.j1 + m.j2 * m.j2 + m.j3 * m.j3;
      worst = std::max(worst, detail::max_abs(cas - j.value() * (j.value() + 1.0) * oracle::Matrix::Identity(j.dim(), j.dim())));
    }
    return worst;
  });

  detail::run(rep, "coherent amplitudes vs D(gamma)|j,j> (2j <= 4)", 1e-12, [&rng] {
    double worst = 0.0;
    for (int tj = 1; tj <= 4; ++tj) {
      const HalfInt j = HalfInt::from_twice(tj);
      for (int s = 0; s < 5; ++s) {
        const cplx g = detail::random_complex(rng, 2.0);
        const oracle::Vector v = oracle::displacement_matrix(j, g) * oracle::highest_weight(j);
        const auto u = su2::coherent_amplitudes(j, g);
        for (int i = 0; i < j.dim(); ++i) worst = std::max(worst, std::abs(v[i] - u[static_cast<std::size_t>(i)]));
      }
    }
    return worst;
  });

  detail::run(rep, "composition rule on matrices (j = 1/2, 1)", 1e-12, [&rng] {
    double worst = 0.0;
    for (int tj : {1, 2}) {
      const HalfInt j = HalfInt::from_twice(tj);
      for (int s = 0; s < 10; ++s) {
        const cplx g1 = detail::random_complex(rng, 1.5), g2 = detail::random_complex(rng, 1.5);
        const auto c = su2::compose(g1, g2);
        const oracle::Matrix lhs = oracle::displacement_matrix(j, g1) * oracle::displacement_matrix(j, g2);
        const oracle::Matrix rhs = oracle::displacement_matrix(j, c.gamma3) * oracle::rotation_z(j, c.varphi);
        worst = std::max(worst, detail::max_abs(lhs - rhs));
      }
    }
    return worst;
  });

  detail::run(rep, "displaced matrix element vs matrices (2j <= 4)", 1e-12, [&rng] {
    double worst = 0.0;
    for (int tj = 1; tj <= 4; ++tj) {
      const HalfInt j = HalfInt::from_twice(tj);
      for (int s = 0; s < 5; ++s) {
        const cplx g1 = detail::random_complex(rng, 1.5), d = detail::random_complex(rng, 1.5),
                   g2 = detail::random_complex(rng, 1.5);
        const oracle::Vector a = oracle::displacement_matrix(j, g1) * oracle::highest_weight(j);
        const oracle::Vector b = oracle::displacement_matrix(j, g2) * oracle::highest_weight(j);
        const cplx ref = a.dot(oracle::displacement_matrix(j, d) * b);
        worst = std::max(worst, std::abs(su2::displaced_matrix_element(j, g1, d, g2) - ref));
      }
    }
    return worst;
  });

  detail::run(rep, "SU(2) Wigner and overlap vs matrix oracle (2j <= 4)", 1e-10, [&rng] {
    double worst = 0.0;
    for (int tj = 1; tj <= 4; ++tj) {
      const HalfInt j = HalfInt::from_twice(tj);
      const oracle::Su2WignerOracle wo(j);
      for (int s = 0; s < 3; ++s) {
        const auto st = detail::random_su2_state(rng, j, 4);
        const auto rho = oracle::su2_density(st);
        const su2::WignerEvaluator w(st);
        const su2::PlaneOverlap f(st);
        for (int k = 0; k < 10; ++k) {
          const cplx g = detail::random_complex(rng, 2.0);
          worst = std::max(worst, std::abs(w(g) - wo(rho, g)));
          worst = std::max(worst, std::abs(f(g) - oracle::su2_overlap_oracle(rho, j, g)));
        }
      }
    }
    return worst;
  });

  detail::run(rep, "Legendre symmetry and P_l(1) = 1 (l <= 60)", 1e-13, [] {
    double worst = 0.0;
    for (int l = 0; l <= 60; ++l) {
      worst = std::max(worst, std::abs(specfn::legendre_p(l, 1.0) - 1.0));
      for (double x : {0.1, 0.37, 0.8}) {
        const double sign = l % 2 == 0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(specfn::legendre_p(l, -x) - sign * specfn::legendre_p(l, x)));
      }
    }
    return worst;
  });

  if (level == Level::quick) return rep;

  detail::run(rep, "closed-form vs general Wigner, cat_h, j = 30, 101x101, |gamma| <= 2", 1e-9, [] {
    const HalfInt j = HalfInt::from_int(30);
    const su2::Group g(j);
    const auto sup = su2::cat_h(j).spec.components().front().pure;
    double worst = 0.0;
    for (int a = 0; a < 101; ++a)
      for (int b = 0; b < 101; ++b) {
        const cplx gam(-2.0 + 0.04 * a, -2.0 + 0.04 * b);
        if (std::abs(gam) > 2.0) continue;
        worst = std::max(worst, std::abs(g.superposition_wigner(sup, gam).real() - su2::closed::cat_h_wigner(j, gam)));
      }
    return worst;
  });

  detail::run(rep, "HW Wigner and overlap vs Fock oracle (x0 = 4, cutoff 64)", 1e-8, [&rng] {
    double worst = 0.0;
    for (const auto& st : {hw::cat_h(4.0), hw::compass(4.0), hw::cat_mixture(4.0)}) {
      const auto fo = oracle::hw_fock_oracle(st, 64);
      const hw::PlaneOverlap f(st);
      for (int k = 0; k < 25; ++k) {
        const cplx r = detail::random_complex(rng, 1.5);
        worst = std::max(worst, std::abs(hw::wigner_at(st, r.real(), r.imag()) - fo.wigner(r.real(), r.imag())));
        worst = std::max(worst, std::abs(f(r.real(), r.imag()) - fo.overlap(0.5 * r)));
      }
    }
    return worst;
  });

  detail::run(rep, "SU(2) sphere sum rule (j = 1/2, 1, 10, 30)", 1e-6, [] {
    double worst = 0.0;
    for (int tj : {1, 2, 20, 60}) {
      const HalfInt j = HalfInt::from_twice(tj);
      for (const auto& st : {su2::cat_h(j), su2::compass(j), su2::cat_mixture(j)}) {
        const su2::WignerEvaluator w(st);
        worst = std::max(worst, std::abs(su2::sphere_normalization(j, w) - 1.0));
      }
    }
    return worst;
  });

  return rep;
}

}  // namespace subplanck::validation
