#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "krsoliton/profile.hpp"
#include "krsoliton/types.hpp"

namespace krsoliton {

using Complex = std::complex<double>;

// Dense Hermitian matrix holding g_{i jbar}-type data; entry(i,j) is the
// component with the second index conjugated.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {}

  int dim() const { return n_; }
  Complex& entry(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const Complex& entry(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * n_ + j];
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : e_) m = std::max(m, std::abs(v));
    return m;
  }

  double hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        m = std::max(m, std::abs(entry(i, j) - std::conj(entry(j, i))));
    return m;
  }

 private:
  int n_;
  std::vector<Complex> e_;
};

namespace detail {

inline double log_norm2(const std::vector<Complex>& z) {
  double s = 0.0;
  for (const auto& v : z) s += std::norm(v);
  if (!(s > 0.0)) throw ProfileDomainError("metric: z must be nonzero");
  return std::log(s);
}

}  // namespace detail

// g_{i jbar} = e^{-t} phi delta_ij + e^{-2t} conj(z_i) z_j (phi' - phi),
// t = log |z|^2. Positive definite whenever phi > 0 and phi' > 0.
inline HermitianMatrix metric_at(const RadialProfile& profile,
                                 const std::vector<Complex>& z) {
  const int n = profile.dim();
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("metric_at: z has wrong dimension");
  const double t = detail::log_norm2(z);
  const ProfilePoint p = profile.at(t);
  const double diag = std::exp(-t) * p.phi;
  const double rank1 = std::exp(-2.0 * t) * (p.phi1 - p.phi);
  HermitianMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g.entry(i, j) = rank1 * std::conj(z[static_cast<std::size_t>(i)]) *
                      z[static_cast<std::size_t>(j)];
      if (i == j) g.entry(i, j) += diag;
    }
  return g;
}

// g^{i jbar} = e^t phi^{-1} delta_ij + z_i conj(z_j) (1/phi' - 1/phi);
// contraction convention: sum_j g_{i jbar} g^{k jbar} = delta_i^k.
inline HermitianMatrix metric_inverse(const RadialProfile& profile,
                                      const std::vector<Complex>& z) {
  const int n = profile.dim();
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("metric_inverse: z has wrong dimension");
  const double t = detail::log_norm2(z);
  const ProfilePoint p = profile.at(t);
  if (!(p.phi > 0.0) || !(p.phi1 > 0.0))
    throw ProfileDomainError("metric_inverse: degenerate profile values");
  const double diag = std::exp(t) / p.phi;
  const double rank1 = 1.0 / p.phi1 - 1.0 / p.phi;
  HermitianMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g.entry(i, j) = rank1 * z[static_cast<std::size_t>(i)] *
                      std::conj(z[static_cast<std::size_t>(j)]);
      if (i == j) g.entry(i, j) += diag;
    }
  return g;
}

// det(g) = e^{-n t} phi^{n-1} phi'.
inline double metric_det(const RadialProfile& profile, double t) {
  const int n = profile.dim();
  const ProfilePoint p = profile.at(t);
  return std::exp(-n * t) * std::pow(p.phi, n - 1) * p.phi1;
}

// f(t) = -log det g = n t - (n-1) log phi - log phi'. The additive constant
// is fixed by reporting f(t) - f(0).
inline double ricci_potential(const RadialProfile& profile, double t) {
  const int n = profile.dim();
  auto f = [&](double tt) {
    const ProfilePoint p = profile.at(tt);
    if (!(p.phi > 0.0) || !(p.phi1 > 0.0))
      throw ProfileDomainError("ricci_potential: log of non-positive value");
    return n * tt - (n - 1) * std::log(p.phi) - std::log(p.phi1);
  };
  return f(t) - f(0.0);
}

struct PotentialDerivs {
  double f1 = 0.0;  // f'(t)
  double f2 = 0.0;  // f''(t)
};

// First two t-derivatives of the Ricci potential, from the profile data:
//   f'  = n - (n-1) phi'/phi - phi''/phi'
//   f'' = -(n-1)(phi''/phi - (phi'/phi)^2) - (phi'''/phi' - (phi''/phi')^2)
// For genuine profiles these collapse to f' = phi' (open cases, alpha = 1)
// and f' = phi + c1 phi' (compact); the general form is kept so that
// inconsistent (perturbed) profiles are evaluated honestly.
inline PotentialDerivs ricci_potential_derivs(const ProfilePoint& p, int n) {
  PotentialDerivs d;
  const double r1 = p.phi1 / p.phi;
  const double r2 = p.phi2 / p.phi1;
  d.f1 = n - (n - 1) * r1 - r2;
  d.f2 = -(n - 1) * (p.phi2 / p.phi - r1 * r1) - (p.phi3 / p.phi1 - r2 * r2);
  return d;
}

inline PotentialDerivs ricci_potential_derivs(const RadialProfile& profile, double t) {
  return ricci_potential_derivs(profile.at(t), profile.dim());
}

// Soliton vector field V^i = z_i f'(t)/u''(t). The ratio f'/phi' is the
// holomorphy constant: alpha = 1 for the open cases, and (f'-phi)/phi' = c1
// for the compact one. V vanishes at the origin of the flat case.
inline std::vector<Complex> soliton_vector_field(const RadialProfile& profile,
                                                 const std::vector<Complex>& z) {
  const int n = profile.dim();
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("soliton_vector_field: z has wrong dimension");
  double s = 0.0;
  for (const auto& v : z) s += std::norm(v);
  if (s == 0.0) {
    if (!std::holds_alternative<FlatSpace>(profile.kind()))
      throw ProfileDomainError("soliton_vector_field: z = 0 outside the flat chart");
    return std::vector<Complex>(static_cast<std::size_t>(n), Complex(0.0));
  }
  const double t = std::log(s);
  const ProfilePoint p = profile.at(t);
  const double ratio = ricci_potential_derivs(p, n).f1 / p.phi1;
  std::vector<Complex> v(z);
  for (auto& c : v) c *= ratio;
  return v;
}

// Ricci tensor at the symmetric point P = (z1, 0, ..., 0) with |z1|^2 = e^t:
// R_{i jbar} = e^{-t} f' delta_ij + e^{-2t} conj(z_i) z_j (f'' - f').
inline HermitianMatrix ricci_tensor(const RadialProfile& profile, double t) {
  const int n = profile.dim();
  const ProfilePoint p = profile.at(t);
  const PotentialDerivs f = ricci_potential_derivs(p, n);
  HermitianMatrix ric(n);
  const double diag = std::exp(-t) * f.f1;
  for (int i = 0; i < n; ++i) ric.entry(i, i) = diag;
  // at P the rank-one part only touches the (1,1) slot
  ric.entry(0, 0) = std::exp(-t) * f.f2;
  return ric;
}

// Scalar curvature (complex trace g^{i jbar} R_{i jbar}) at the symmetric
// point: R = (n-1) f'/phi + f''/phi'.
inline double scalar_curvature(const RadialProfile& profile, double t) {
  const int n = profile.dim();
  const ProfilePoint p = profile.at(t);
  const PotentialDerivs f = ricci_potential_derivs(p, n);
  return (n - 1) * f.f1 / p.phi + f.f2 / p.phi1;
}

// Ratio V(t)/rho(t)^n of the unnormalized geodesic-ball volume to the n-th
// power of the radius. V reduces to (phi^n - phi_min^n)/n through the
// determinant closed form; only the ratio is reported since the growth order
// is the claim of interest.
inline double volume_growth(const RadialProfile& profile, double t) {
  if (std::holds_alternative<CompactBundle>(profile.kind()))
    throw ProfileDomainError("volume_growth: open cases only");
  const int n = profile.dim();
  const double phi_min = std::holds_alternative<FlatSpace>(profile.kind())
                             ? 0.0
                             : std::get<CanonicalBundle>(profile.kind()).a;
  const double phi = profile.at(t).phi;
  const double vol = (std::pow(phi, n) - std::pow(phi_min, n)) / n;
  const double rho = distance(profile, t);
  return vol / std::pow(rho, n);
}

// Unnormalized ball volume itself (monotonicity checks).
inline double ball_volume(const RadialProfile& profile, double t) {
  if (std::holds_alternative<CompactBundle>(profile.kind()))
    throw ProfileDomainError("ball_volume: open cases only");
  const int n = profile.dim();
  const double phi_min = std::holds_alternative<FlatSpace>(profile.kind())
                             ? 0.0
                             : std::get<CanonicalBundle>(profile.kind()).a;
  const double phi = profile.at(t).phi;
  return (std::pow(phi, n) - std::pow(phi_min, n)) / n;
}

}  // namespace krsoliton
