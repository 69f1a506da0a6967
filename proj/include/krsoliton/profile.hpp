#pragma once

#include <cmath>
#include <memory>
#include <optional>

#include "krsoliton/compact.hpp"
#include "krsoliton/implicit.hpp"
#include "krsoliton/quadrature.hpp"
#include "krsoliton/series.hpp"
#include "krsoliton/types.hpp"

namespace krsoliton {

// A realized soliton profile. Immutable after construction; evaluators are
// pure, so instances can be shared freely across threads.
//
// For the open cases (FlatSpace, CanonicalBundle) evaluation solves the
// implicit profile equation at the requested t and fills the derivatives in
// via the exact recurrences. For CompactBundle it inverts the anchored
// t(phi) parameterization and uses the closed-form phi'(phi).
//
// `perturbed(s)` returns a deliberately broken copy: phi is scaled by s while
// the derivatives are still produced by the recurrences, so the result is no
// longer a solution of the profile equation. Used as the negative control.
class RadialProfile {
 public:
  static RadialProfile flat(int n, double tol = 1e-12) {
    RadialProfile p;
    p.kind_ = FlatSpace{n};
    validate(p.kind_);
    p.tol_ = tol;
    p.tail_ = detail::flat_tail_coefficients(n);
    return p;
  }

  static RadialProfile bundle(int n, double a, double tol = 1e-12) {
    RadialProfile p;
    p.kind_ = CanonicalBundle{n, a};
    validate(p.kind_);
    p.tol_ = tol;
    return p;
  }

  static RadialProfile compact(int n, int k, double tol = 1e-14) {
    RadialProfile p;
    p.kind_ = CompactBundle{n, k};
    validate(p.kind_);
    p.tol_ = tol;
    p.compact_ = std::make_shared<CompactSoliton>(n, k, tol);
    return p;
  }

  RadialProfile perturbed(double scale) const {
    if (std::holds_alternative<CompactBundle>(kind_))
      throw std::invalid_argument("perturbed: open cases only");
    RadialProfile p = *this;
    p.perturbation_ = scale;
    return p;
  }

  const SolitonKind& kind() const { return kind_; }
  int dim() const { return complex_dim(kind_); }
  double tolerance() const { return tol_; }
  double perturbation() const { return perturbation_; }
  bool is_perturbed() const { return perturbation_ != 1.0; }

  // Constant C of the implicit equation ((-1)^{n-1} n! flat, S(n,a) bundle,
  // c2 for the compact case).
  double integration_constant() const {
    if (const auto* f = std::get_if<FlatSpace>(&kind_)) return flat_constant(f->n);
    if (const auto* b = std::get_if<CanonicalBundle>(&kind_))
      return bundle_constant(b->n, b->a);
    return compact_->certificate().c2;
  }

  const CompactSoliton* compact_geometry() const { return compact_.get(); }

  ProfilePoint at(double t) const {
    ProfilePoint p;
    p.t = t;
    if (const auto* c = std::get_if<CompactBundle>(&kind_)) {
      (void)c;
      const double phi = compact_->phi_of_t(t, tol_);
      p.phi = phi;
      p.phi1 = compact_->phi_prime(phi);
      p.phi2 = compact_->phi_second(phi);
      p.phi3 = compact_->phi_third(phi);
      return p;
    }
    const int n = dim();
    const double base = std::holds_alternative<FlatSpace>(kind_)
                            ? 0.0
                            : std::get<CanonicalBundle>(kind_).a;
    double phi = detail::solve_shifted(n, base, t, tol_, 200).phi;
    phi *= perturbation_;
    const PhiDerivs d = phi_derivatives(n, t, phi);
    p.phi = phi;
    p.phi1 = d.phi1;
    p.phi2 = d.phi2;
    p.phi3 = d.phi3;
    return p;
  }

  // Deep-tail expansion coefficients (flat case only): phi = sum a_m e^{mt}.
  const detail::TailSeries& tail_series() const {
    if (!std::holds_alternative<FlatSpace>(kind_))
      throw std::invalid_argument("tail_series: flat case only");
    return tail_;
  }

 private:
  RadialProfile() = default;

  SolitonKind kind_ = FlatSpace{1};
  double tol_ = 1e-12;
  double perturbation_ = 1.0;
  detail::TailSeries tail_{};
  std::shared_ptr<const CompactSoliton> compact_;
};

// Distance from the origin (flat) or from the zero section (bundle) along the
// radial direction: rho(t) = Int_{-inf}^t sqrt(phi'(tau)) dtau. The tail
// below t0 = -40 is analytic: phi' ~ e^t for the flat case (giving
// 2 e^{t0/2} + (2 a2/3) e^{3 t0/2}) and phi' ~ e^{n t}/(a^{n-1} e^a) for the
// bundle.
inline double distance(const RadialProfile& profile, double t, double rel_tol = 1e-10) {
  if (std::holds_alternative<CompactBundle>(profile.kind()))
    throw ProfileDomainError("distance: open cases only (compact uses t_of_phi)");
  const double t0 = -40.0;
  auto tail = [&](double tt) {
    if (std::holds_alternative<FlatSpace>(profile.kind())) {
      const double a2 = series_coefficients(profile.dim()).a2;
      return 2.0 * std::exp(0.5 * tt) + (2.0 / 3.0) * a2 * std::exp(1.5 * tt);
    }
    const auto& b = std::get<CanonicalBundle>(profile.kind());
    const double n = b.n;
    return (2.0 / n) * std::exp(0.5 * n * tt) /
           std::sqrt(std::pow(b.a, b.n - 1) * std::exp(b.a));
  };
  if (t <= t0) return tail(t);
  auto integrand = [&](double tau) { return std::sqrt(profile.at(tau).phi1); };
  return tail(t0) + integrate_adaptive(integrand, t0, t, rel_tol, 1e-14).value;
}

}  // namespace krsoliton
