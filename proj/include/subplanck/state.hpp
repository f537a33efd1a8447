#pragma once

// Coherent-state superpositions and mixtures, independent of the group.
//
// A state is a convex combination of pure superpositions sum_n psi_n |label_n>.
// Nothing here assumes normalisation: norms come from the Gram matrix of
// coherent overlaps supplied by the group.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subplanck/errors.hpp"

namespace subplanck {

using cplx = std::complex<double>;

template <class Label>
struct Term {
  cplx weight;
  Label label;
};

template <class Label>
using Superposition = std::vector<Term<Label>>;

template <class Label>
struct MixtureComponent {
  double weight;
  Superposition<Label> pure;
};

template <class Label>
class StateSpec {
 public:
  StateSpec() = default;

  static StateSpec pure(Superposition<Label> terms, std::string name = "custom") {
    StateSpec s;
    s.components_.push_back({1.0, std::move(terms)});
    s.name_ = std::move(name);
    s.pure_ = true;
    s.validate();
    return s;
  }

  static StateSpec mixture(std::vector<MixtureComponent<Label>> parts, std::string name = "mixture") {
    StateSpec s;
    s.components_ = std::move(parts);
    s.name_ = std::move(name);
    s.pure_ = false;
    s.validate();
    return s;
  }

  bool is_pure() const { return pure_; }
  const std::vector<MixtureComponent<Label>>& components() const { return components_; }
  const std::string& name() const { return name_; }

  /// Scale parameter (x0 or j) when built by a named constructor.
  std::optional<double> scale() const { return scale_; }
  StateSpec& with_scale(double s) {
    scale_ = s;
    return *this;
  }

  /// Applies `f` to every label; used for rotations of named states.
  template <class F>
  StateSpec map_labels(F f, std::string name) const {
    StateSpec out = *this;
    for (auto& c : out.components_)
      for (auto& t : c.pure) t.label = f(t.label);
    out.name_ = std::move(name);
    return out;
  }

 private:
  void validate() const {
    if (components_.empty()) throw ConfigError("state has no components");
    for (const auto& c : components_) {
      if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw ConfigError("mixture weight must be finite and >= 0");
      if (c.pure.empty()) throw ConfigError("superposition has no terms");
      for (const auto& t : c.pure) {
        if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag()))
          throw ConfigError("superposition weight is not finite");
      }
    }
  }

  std::vector<MixtureComponent<Label>> components_;
  std::string name_;
  bool pure_ = true;
  std::optional<double> scale_;
};

// ---------------------------------------------------------------------------
// Generic evaluation. `Group` provides
//   cplx overlap(const Label& a, const Label& b) const;            <a|b>
//   cplx displaced(const Label& a, cplx delta, const Label& b) const; <a|D(delta)|b>
//   template <class Point> cplx superposition_wigner(const Superposition<Label>&, Point) const;
//       sum_nm psi_n psi_m^* W_{|n><m|}, unnormalised

/// <psi|psi> for an unnormalised superposition.
template <class Group, class Label>
double squared_norm(const Group& g, const Superposition<Label>& sup) {
  cplx acc = 0.0;
  for (const auto& a : sup)
    for (const auto& b : sup) acc += std::conj(a.weight) * b.weight * g.overlap(a.label, b.label);
  return acc.real();
}

/// <a|D(delta)|b> for unnormalised superpositions.
template <class Group, class Label>
cplx transition(const Group& g, const Superposition<Label>& a, cplx delta, const Superposition<Label>& b) {
  cplx acc = 0.0;
  for (const auto& ta : a)
    for (const auto& tb : b) acc += std::conj(ta.weight) * tb.weight * g.displaced(ta.label, delta, tb.label);
  return acc;
}

/// Norms of every mixture component, checked positive.
template <class Group, class Label>
std::vector<double> component_norms(const Group& g, const StateSpec<Label>& state) {
  std::vector<double> norms;
  norms.reserve(state.components().size());
  for (const auto& c : state.components()) {
    const double n = squared_norm(g, c.pure);
    if (!(n > 0.0)) throw NumericError("state '" + state.name() + "' has non-positive norm");
    norms.push_back(n);
  }
  return norms;
}

/// Wigner value of the normalised state at `point`, with precomputed component norms.
template <class Group, class Label, class Point>
double wigner_value(const Group& g, const StateSpec<Label>& state, const std::vector<double>& norms, Point point,
                    double imag_tol) {
  double total_weight = 0.0;
  double acc = 0.0;
  const auto& comps = state.components();
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (comps[k].weight == 0.0) continue;
    const cplx w = g.superposition_wigner(comps[k].pure, point);
    if (std::abs(w.imag()) > imag_tol * std::max(1.0, std::abs(w.real())))
      throw NumericError("Wigner sum has imaginary residue " + std::to_string(w.imag()));
    acc += comps[k].weight * w.real() / norms[k];
    total_weight += comps[k].weight;
  }
  return acc / total_weight;
}

/// tr{rho D rho D^dagger} for the normalised state, without the tr(rho^2) factor.
template <class Group, class Label>
double overlap_unnormalized(const Group& g, const StateSpec<Label>& state, const std::vector<double>& norms,
                            cplx delta) {
  const auto& comps = state.components();
  double wsum = 0.0;
  for (const auto& c : comps) wsum += c.weight;
  double acc = 0.0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    for (std::size_t l = 0; l < comps.size(); ++l) {
      const double w = comps[k].weight * comps[l].weight;
      if (w == 0.0) continue;
      acc += w * std::norm(transition(g, comps[k].pure, delta, comps[l].pure)) / (norms[k] * norms[l]);
    }
  }
  return acc / (wsum * wsum);
}

/// F(delta) = tr{rho D rho D^dagger} / tr{rho^2}, so that F(0) = 1.
template <class Group, class Label>
double overlap_value(const Group& g, const StateSpec<Label>& state, const std::vector<double>& norms, cplx delta) {
  if (state.is_pure()) {
    const auto& c = state.components().front();
    return std::norm(transition(g, c.pure, delta, c.pure)) / (norms[0] * norms[0]);
  }
  return overlap_unnormalized(g, state, norms, delta) / overlap_unnormalized(g, state, norms, cplx{0.0, 0.0});
}

}  // namespace subplanck
