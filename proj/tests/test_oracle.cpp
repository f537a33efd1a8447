#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "subplanck/hw.hpp"
#include "subplanck/oracle.hpp"
#include "subplanck/su2.hpp"

using namespace subplanck;

namespace {

HalfInt J(int twice) { return HalfInt::from_twice(twice); }

cplx rnd(std::mt19937_64& rng, double s) {
  std::uniform_real_distribution<double> u(-s, s);
  return {u(rng), u(rng)};
}

double max_abs(const oracle::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

su2::State random_state(std::mt19937_64& rng, HalfInt j, int terms) {
  Superposition<su2::Label> sup;
  for (int t = 0; t < terms; ++t) sup.push_back({rnd(rng, 1.0), {rnd(rng, 1.5)}});
  return {j, StateSpec<su2::Label>::pure(std::move(sup), "random")};
}

}  // namespace

TEST(OracleSpin, PauliMatricesAtSpinHalf) {
  const auto m = oracle::j_matrices(J(1));
  // Basis is ordered by ascending mu; reverse it to compare with the usual Pauli layout.
  oracle::Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  oracle::Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  EXPECT_LT(max_abs(flip * m.j1 * flip - 0.5 * sx), 1e-15);
  EXPECT_LT(max_abs(flip * m.j2 * flip - 0.5 * sy), 1e-15);
  EXPECT_LT(max_abs(flip * m.j3 * flip - 0.5 * sz), 1e-15);
}

TEST(OracleSpin, CommutatorsAndHermiticity) {
  for (int tj = 0; tj <= 8; ++tj) {
    const auto m = oracle::j_matrices(J(tj));
    const cplx i(0, 1);
    EXPECT_LT(max_abs(m.j1 * m.j2 - m.j2 * m.j1 - i * m.j3), 1e-13);
    EXPECT_LT(max_abs(m.j2 * m.j3 - m.j3 * m.j2 - i * m.j1), 1e-13);
    EXPECT_LT(max_abs(m.j3 * m.j1 - m.j1 * m.j3 - i * m.j2), 1e-13);
    for (const auto* a : {&m.j1, &m.j2, &m.j3}) EXPECT_LT(max_abs(*a - a->adjoint()), 1e-15);
    // lowering amplitudes N_mu = sqrt((j + mu)(j - mu + 1))
    for (int k = 1; k <= tj; ++k) {
      const double mu = -0.5 * tj + k;
      EXPECT_NEAR(std::abs(m.lower(k - 1, k)), std::sqrt((0.5 * tj + mu) * (0.5 * tj - mu + 1)), 1e-14);
    }
  }
}

TEST(OracleSpin, DisplacementIsUnitaryAndRotatesPole) {
  std::mt19937_64 rng(1);
  for (int tj : {1, 2, 5, 8}) {
    const HalfInt j = J(tj);
    for (int k = 0; k < 5; ++k) {
      const cplx g = rnd(rng, 3.0);
      const oracle::Matrix d = oracle::displacement_matrix(j, g);
      EXPECT_LT(max_abs(d * d.adjoint() - oracle::Matrix::Identity(j.dim(), j.dim())), 1e-12);
      // <J> of D|j,j> points along the sphere direction of gamma.
      const auto m = oracle::j_matrices(j);
      const oracle::Vector v = d * oracle::highest_weight(j);
      const auto s = su2::stereographic_to_sphere(g);
      EXPECT_NEAR(v.dot(m.j3 * v).real(), j.value() * std::cos(s.theta), 1e-12);
      EXPECT_NEAR(v.dot(m.j1 * v).real(), j.value() * std::sin(s.theta) * std::cos(s.phi), 1e-12);
      EXPECT_NEAR(v.dot(m.j2 * v).real(), j.value() * std::sin(s.theta) * std::sin(s.phi), 1e-12);
    }
  }
}

TEST(OracleSpin, KernelWeightsSumToOne) {
  for (int tj = 0; tj <= 6; ++tj) {
    double s = 0;
    for (double w : oracle::kernel_weights_oracle(J(tj))) s += w;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(OracleSpin, WignerOracleChecksTrace) {
  const oracle::Su2WignerOracle w(J(2));
  EXPECT_THROW(w(2.0 * oracle::Matrix::Identity(3, 3), 0.0), std::invalid_argument);
  EXPECT_NO_THROW(w(oracle::Matrix::Identity(3, 3) / 3.0, cplx(0.2, 0.1)));
  // maximally mixed state has a flat Wigner function equal to 1/(2j+1)
  EXPECT_NEAR(w(oracle::Matrix::Identity(3, 3) / 3.0, cplx(0.7, -0.4)), 1.0 / 3.0, 1e-13);
}

TEST(OracleEquivalence, Su2WignerAndOverlapRandomSuperpositions) {
  std::mt19937_64 rng(2024);
  for (int tj = 1; tj <= 4; ++tj) {
    const HalfInt j = J(tj);
    const oracle::Su2WignerOracle wo(j);
    for (int s = 0; s < 5; ++s) {
      const auto st = random_state(rng, j, 4);
      const auto rho = oracle::su2_density(st);
      const su2::WignerEvaluator w(st);
      const su2::PlaneOverlap f(st);
      for (int k = 0; k < 25; ++k) {
        const cplx g = rnd(rng, 2.0);
        EXPECT_NEAR(w(g), wo(rho, g), 1e-10);
        EXPECT_NEAR(f(g), oracle::su2_overlap_oracle(rho, j, g), 1e-10);
      }
    }
  }
}

TEST(OracleEquivalence, Su2WignerAtAntipodesOfLabels) {
  for (int tj = 1; tj <= 6; ++tj) {
    const HalfInt j = J(tj);
    const oracle::Su2WignerOracle wo(j);
    for (const auto& st : {su2::cat_h(j), su2::compass(j), su2::coherent(j, cplx(0.3, 0.8))}) {
      const auto rho = oracle::su2_density(st);
      const su2::WignerEvaluator w(st);
      for (const auto& t : st.spec.components().front().pure) {
        const cplx anti = -1.0 / std::conj(t.label.gamma);
        EXPECT_NEAR(w(anti), wo(rho, anti), 1e-10);
        EXPECT_NEAR(w(t.label.gamma), wo(rho, t.label.gamma), 1e-10);
      }
    }
  }
}

TEST(OracleEquivalence, Su2Mixture) {
  for (int tj = 1; tj <= 4; ++tj) {
    const HalfInt j = J(tj);
    const auto st = su2::cat_mixture(j);
    const auto rho = oracle::su2_density(st);
    const su2::WignerEvaluator w(st);
    const su2::PlaneOverlap f(st);
    const oracle::Su2WignerOracle wo(j);
    for (double x = -1.5; x <= 1.5; x += 0.5)
      for (double p = -1.5; p <= 1.5; p += 0.5) {
        EXPECT_NEAR(w(x, p), wo(rho, cplx(x, p)), 1e-10);
        EXPECT_NEAR(f(x, p), oracle::su2_overlap_oracle(rho, j, cplx(x, p)), 1e-10);
      }
  }
}

TEST(OracleFock, CutoffRule) {
  EXPECT_EQ(oracle::fock_cutoff_rule(0.0), 20);
  EXPECT_EQ(oracle::fock_cutoff_rule(2.0), 40);
  EXPECT_EQ(oracle::fock_cutoff_rule(4.0), 68);
  EXPECT_THROW(oracle::hw_fock_oracle(hw::cat_h(8), 64), std::invalid_argument);
  EXPECT_THROW(oracle::hw_fock_oracle(hw::coherent(cplx(6.5, 0)), 200), std::invalid_argument);
  const auto fo = oracle::hw_fock_oracle(hw::coherent(0.0), 24);
  EXPECT_THROW(fo.wigner(3.0, 0.0), std::invalid_argument);  // |beta| = 1.5 needs 35 levels
}

TEST(OracleFock, VacuumAndCoherent) {
  const auto fo = oracle::hw_fock_oracle(hw::coherent(0.0), 40);
  EXPECT_NEAR(fo.wigner(0, 0), 1.0 / (2 * std::numbers::pi), 1e-13);
  EXPECT_NEAR(fo.wigner(1.0, -0.5), std::exp(-0.5 * 1.25) / (2 * std::numbers::pi), 1e-13);
  EXPECT_NEAR(fo.overlap(cplx(0.5, 0.5)), std::exp(-0.5), 1e-13);
  EXPECT_NEAR(fo.density().trace().real(), 1.0, 1e-13);
}

TEST(OracleEquivalence, HwNamedStatesAtX0Four) {
  std::mt19937_64 rng(77);
  for (const auto& st : {hw::cat_h(4.0), hw::cat_v(4.0), hw::compass(4.0), hw::cat_mixture(4.0)}) {
    const auto fo = oracle::hw_fock_oracle(st, 64);
    const hw::PlaneOverlap f(st);
    for (int k = 0; k < 25; ++k) {
      const cplx r = rnd(rng, 1.5);
      EXPECT_NEAR(hw::wigner_at(st, r.real(), r.imag()), fo.wigner(r.real(), r.imag()), 1e-8);
      EXPECT_NEAR(f(r.real(), r.imag()), fo.overlap(0.5 * r), 1e-8);
    }
  }
}

TEST(OracleEquivalence, HwRandomSuperpositions) {
  std::mt19937_64 rng(78);
  for (int s = 0; s < 5; ++s) {
    Superposition<hw::Label> sup;
    for (int t = 0; t < 4; ++t) sup.push_back({rnd(rng, 1.0), {rnd(rng, 1.5)}});
    const auto st = hw::State::pure(sup, "random");
    const auto fo = oracle::hw_fock_oracle(st, 64);
    for (int k = 0; k < 25; ++k) {
      const cplx r = rnd(rng, 1.5);
      EXPECT_NEAR(hw::wigner_at(st, r.real(), r.imag()), fo.wigner(r.real(), r.imag()), 1e-8);
      EXPECT_NEAR(hw::overlap(st, 0.5 * r), fo.overlap(0.5 * r), 1e-8);
    }
  }
}
