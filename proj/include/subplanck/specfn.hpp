#pragma once

// Special functions behind the SU(2) Stratonovich-Weyl kernel.
//
// Coupling convention for Clebsch-Gordan coefficients is <j1,m1; j2,m2 | J,M>
// (j1 (x) j2 -> J) with the Condon-Shortley phase. The kernel weights use
// <j,mu; l,0 | j,mu>, i.e. system first, tensor rank second.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "subplanck/half_int.hpp"

namespace subplanck::specfn {

namespace detail {

inline constexpr int kLnFactorialTableSize = 4096;

inline const std::array<double, kLnFactorialTableSize>& ln_factorial_table() {
  static const auto table = [] {
    std::array<double, kLnFactorialTableSize> t{};
    t[0] = 0.0;
    t[1] = 0.0;
    for (int n = 2; n < kLnFactorialTableSize; ++n) t[n] = std::lgamma(n + 1.0);
    return t;
  }();
  return table;
}

}  // namespace detail

/// ln(n!) for n >= 0.
inline double ln_factorial(long long n) {
  if (n < 0) throw std::domain_error("ln_factorial: negative argument " + std::to_string(n));
  if (n < detail::kLnFactorialTableSize) return detail::ln_factorial_table()[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Legendre polynomial P_l(x) by upward three-term recurrence.
inline double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: negative degree");
  if (!(std::abs(x) <= 1.0 + 1e-12)) throw std::domain_error("legendre_p: |x| > 1");
  if (x > 1.0) x = 1.0;
  if (x < -1.0) x = -1.0;
  if (l == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return p;
}

/// Y_lm(theta, phi), orthonormal on the sphere, Condon-Shortley phase.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) {
    throw std::out_of_range("spherical_harmonic: need |m| <= l, got l=" + std::to_string(l) +
                            " m=" + std::to_string(m));
  }
  const int am = std::abs(m);
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Normalised associated Legendre functions, upward in l at fixed |m|.
  double p_mm = std::sqrt(1.0 / (4.0 * std::numbers::pi));
  for (int i = 1; i <= am; ++i) p_mm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;

  double p_l = p_mm;
  if (l > am) {
    double p_lm1 = p_mm;
    p_l = x * std::sqrt(2.0 * am + 3.0) * p_mm;
    for (int ll = am + 2; ll <= l; ++ll) {
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - am * am));
      const double b = std::sqrt((static_cast<double>(ll - 1) * (ll - 1) - am * am) /
                                 (4.0 * (ll - 1) * (ll - 1) - 1.0));
      const double next = a * (x * p_l - b * p_lm1);
      p_lm1 = p_l;
      p_l = next;
    }
  }

  const std::complex<double> y = p_l * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

/// <j1,m1; j2,m2 | J,M> via Racah's single-sum formula: prefactor in log space,
/// alternating sum in long double.
/// Returns 0 for any combination that violates the selection rules.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  if (m1.twice() + m2.twice() != M.twice()) return 0.0;
  if (!is_projection_of(m1, j1) || !is_projection_of(m2, j2) || !is_projection_of(M, J)) return 0.0;
  const int tj1 = j1.twice(), tj2 = j2.twice(), tJ = J.twice();
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0) return 0.0;

  // Every combination below is an integer by the parity checks above.
  const int a = (tj1 + tj2 - tJ) / 2;              // j1+j2-J
  const int b = (tj1 - m1.twice()) / 2;            // j1-m1
  const int c = (tj2 + m2.twice()) / 2;            // j2+m2
  const int d = (tJ - tj2 + m1.twice()) / 2;       // J-j2+m1
  const int e = (tJ - tj1 - m2.twice()) / 2;       // J-j1-m2

  auto lnf = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };
  const long double ln_pre =
      0.5L * (std::log(tJ + 1.0L) + lnf((tJ + tj1 - tj2) / 2) + lnf((tJ - tj1 + tj2) / 2) + lnf(a) -
              lnf((tj1 + tj2 + tJ) / 2 + 1) + lnf((tJ + M.twice()) / 2) + lnf((tJ - M.twice()) / 2) + lnf(b) +
              lnf((tj1 + m1.twice()) / 2) + lnf((tj2 - m2.twice()) / 2) + lnf(c));

  const int k_min = std::max({0, -d, -e});
  const int k_max = std::min({a, b, c});
  if (k_min > k_max) return 0.0;

  // Terms relative to the first one through their exact rational ratio,
  // t_{k+1}/t_k = -(a-k)(b-k)(c-k) / ((k+1)(d+k+1)(e+k+1)), rescaled to stay in range.
  const long double ln_first =
      -(lnf(k_min) + lnf(a - k_min) + lnf(b - k_min) + lnf(c - k_min) + lnf(d + k_min) + lnf(e + k_min));
  const long double first_sign = k_min % 2 == 0 ? 1.0L : -1.0L;
  long double term = 1.0L, sum = 1.0L, ln_scale = 0.0L;
  for (int k = k_min; k < k_max; ++k) {
    term *= -static_cast<long double>(a - k) * (b - k) * (c - k) / (static_cast<long double>(k + 1) * (d + k + 1) * (e + k + 1));
    sum += term;
    if (std::abs(term) > 1e300L) {
      term *= 1e-300L;
      sum *= 1e-300L;
      ln_scale += 300.0L * std::log(10.0L);
    }
  }
  return static_cast<double>(first_sign * sum * std::exp(ln_pre + ln_first + ln_scale));
}

/// Diagonal of the Stratonovich-Weyl kernel in the |j,mu> basis.
class KernelWeights {
 public:
  KernelWeights(HalfInt j, std::vector<double> weights) : j_(j), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != j_.dim()) throw std::invalid_argument("KernelWeights: size != 2j+1");
  }

  HalfInt j() const { return j_; }
  /// Weights ordered by ascending mu: index i <-> mu = -j + i.
  const std::vector<double>& weights() const { return weights_; }
  double at(HalfInt mu) const { return weights_.at(static_cast<std::size_t>((mu.twice() + j_.twice()) / 2)); }

  double sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

 private:
  HalfInt j_;
  std::vector<double> weights_;
};

/// Delta_mu = sum_{l=0}^{2j} (2l+1)/(2j+1) <j,mu; l,0 | j,mu>.
inline KernelWeights kernel_weights(HalfInt j) {
  if (j.twice() < 0) throw std::domain_error("kernel_weights: negative j");
  std::vector<double> w(static_cast<std::size_t>(j.dim()));
  for (int i = 0; i < j.dim(); ++i) {
    const HalfInt mu = HalfInt::from_twice(-j.twice() + 2 * i);
    long double acc = 0.0L;
    for (int l = 0; l <= j.twice(); ++l) {
      acc += (2.0L * l + 1.0L) * clebsch_gordan(j, mu, HalfInt::from_int(l), HalfInt{}, j, mu);
    }
    w[static_cast<std::size_t>(i)] = static_cast<double>(acc / (j.twice() + 1.0L));
  }
  return KernelWeights(j, std::move(w));
}

}  // namespace subplanck::specfn
