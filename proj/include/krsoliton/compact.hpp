#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "krsoliton/exactpoly.hpp"
#include "krsoliton/implicit.hpp"
#include "krsoliton/quadrature.hpp"
#include "krsoliton/types.hpp"

namespace krsoliton {

// Certified constants (c1, c2) of the compact case together with the
// residuals of both pole conditions and the residues at the two sections.
struct RootCertificate {
  int n = 0;
  int k = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual_48 = 0.0;   // left-pole defining equation (zero by construction)
  double residual_49 = 0.0;   // right-pole equation, relative
  double den_left = 0.0;      // D(n-k) closure, relative to the c2 scale
  double den_right = 0.0;     // D(n+k)
  double residue_left = 0.0;  // expected +1/k
  double residue_right = 0.0; // expected -1/k

  bool valid(double tol_den = 1e-9, double tol_res = 1e-6) const {
    return c1 > -1.0 && c1 < 0.0 && std::abs(den_left) <= tol_den &&
           std::abs(den_right) <= tol_den &&
           std::abs(residue_left - 1.0 / k) <= tol_res &&
           std::abs(residue_right + 1.0 / k) <= tol_res &&
           std::abs(residual_49) <= 1e-8;
  }
};

namespace detail {

struct FindC1Result {
  double root = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Unique root of h in (-1, 0): bisection bracket refined by Newton, plus a
// dense scan certifying one sign change in (-1,0) and none in (0, scan_hi].
//
// h vanishes to order n+1 at x = 0, so near that endpoint the double
// evaluation is pure rounding noise (|h(-eps)| ~ n! b_{n+1} eps^{n+1} falls
// below eps_machine * sum|coeff| for the nominal guard 1e-6). The right
// guard therefore grows from 1e-6 until the endpoint value clears the noise
// floor with the sign (-1)^{n+1} the series dictates; the scans gate values
// below the floor the same way.
inline FindC1Result find_c1_impl(int n, int k, double tol, int scan_points, double scan_hi) {
  PolyExpPair h = build_h(n, k);
  PolyExpPair h1 = h_derivative(h, 1);

  std::vector<double> pa, qa;
  for (const auto& c : h.p.c) pa.push_back(std::abs(c.get_d()));
  for (const auto& c : h.q.c) qa.push_back(std::abs(c.get_d()));
  auto noise_floor = [&](double x) {
    const double ax = std::abs(x);
    double sp = 0.0, sq = 0.0;
    for (int j = static_cast<int>(pa.size()) - 1; j >= 0; --j) sp = sp * ax + pa[static_cast<std::size_t>(j)];
    for (int j = static_cast<int>(qa.size()) - 1; j >= 0; --j) sq = sq * ax + qa[static_cast<std::size_t>(j)];
    return 64.0 * std::numeric_limits<double>::epsilon() *
           (std::exp(2.0 * k * x) * sp + sq);
  };

  double lo = -1.0 + 1e-6;
  double flo = h.eval(lo);
  const double sign_hi = (n % 2 == 0) ? -1.0 : 1.0;  // sign of h just left of 0
  double eps_hi = 1e-6;
  double fhi = h.eval(-eps_hi);
  while ((std::abs(fhi) <= noise_floor(-eps_hi) || fhi * sign_hi < 0.0) && eps_hi < 0.3) {
    eps_hi *= 4.0;
    fhi = h.eval(-eps_hi);
  }
  double hi = -eps_hi;
  if (flo * fhi > 0.0)
    throw NonConvergenceError("find_c1: no sign change on (-1,0) bracket");

  // uniqueness scans (safety net, not a proof); noise-level samples skipped
  int changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 1; i < scan_points; ++i) {
    const double x = -1.0 + static_cast<double>(i) / scan_points;
    const double v = h.eval(x);
    if (std::abs(v) <= noise_floor(x)) continue;
    if (have_prev && prev * v < 0.0) ++changes;
    prev = v;
    have_prev = true;
  }
  if (changes != 1)
    throw NonConvergenceError("find_c1: expected exactly one sign change on (-1,0), found " +
                              std::to_string(changes));
  for (int i = 1; i <= scan_points; ++i) {
    const double x = scan_hi * static_cast<double>(i) / scan_points;
    const double v = h.eval(x);
    if (std::abs(v) <= noise_floor(x)) continue;
    if (v < 0.0) throw NonConvergenceError("find_c1: unexpected zero of h on (0, scan_hi]");
  }

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = h.eval(x);
    if (f == 0.0) break;
    if (f * flo < 0.0)
      hi = x;
    else {
      lo = x;
      flo = f;
    }
    const double df = h1.eval(x);
    double next = (df != 0.0) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  const double local = std::exp(2.0 * k * x) * std::abs(h.p.eval(x)) + std::abs(h.q.eval(x));
  if (std::abs(h.eval(x)) > std::max(tol * local, 8.0 * noise_floor(x)))
    throw NonConvergenceError("find_c1: residual above tolerance");
  return {x, -1.0 + 1e-6, -eps_hi};
}

}  // namespace detail

inline double find_c1(int n, int k, double tol = 1e-14, int scan_points = 10000,
                      double scan_hi = 10.0) {
  return detail::find_c1_impl(n, k, tol, scan_points, scan_hi).root;
}

namespace detail {

// Denominator D(phi) of the implicit t(phi) integrand; phi' = -D / (c1^{n+1} phi^{n-1}).
struct CompactDen {
  int n;
  double c1, c2;
  std::vector<double> poly;  // c1^n phi^n + sum_{j<n} (-1)^{n-j} (n!/j!)(1+c1) c1^j phi^j

  CompactDen(int n_, int k_, double c1_, double c2_) : n(n_), c1(c1_), c2(c2_) {
    (void)k_;
    poly.assign(static_cast<std::size_t>(n) + 1, 0.0);
    poly[static_cast<std::size_t>(n)] = std::pow(c1, n);
    const double nf = factorial(n);
    double jf = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j > 0) jf *= j;
      const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
      poly[static_cast<std::size_t>(j)] = sign * nf / jf * (1.0 + c1) * std::pow(c1, j);
    }
  }

  double value(double phi) const {
    double acc = 0.0;
    for (int j = n; j >= 0; --j) acc = acc * phi + poly[static_cast<std::size_t>(j)];
    return acc - c2 * std::exp(-c1 * phi);
  }

  // magnitude of the terms entering value(); the natural scale for relative
  // residuals (the endpoint closures cancel terms of this size)
  double scale(double phi) const {
    double acc = 0.0;
    for (int j = n; j >= 0; --j)
      acc = acc * std::abs(phi) + std::abs(poly[static_cast<std::size_t>(j)]);
    return acc + std::abs(c2) * std::exp(-c1 * phi);
  }

  double derivative(double phi) const {
    double acc = 0.0;
    for (int j = n; j >= 1; --j)
      acc = acc * phi + static_cast<double>(j) * poly[static_cast<std::size_t>(j)];
    return acc + c1 * c2 * std::exp(-c1 * phi);
  }
};

}  // namespace detail

// c2 from the left-pole equation, plus the residuals of both pole equations.
struct C2Result {
  double c2 = 0.0;
  double residual_48 = 0.0;
  double residual_49 = 0.0;
};

inline C2Result compute_c2(int n, int k, double c1) {
  PolyExpPair h = build_h(n, k);
  const double a = n - k, b = n + k;
  const double q = h.q.eval(c1);
  const double p = h.p.eval(c1);
  C2Result r;
  r.c2 = std::exp(a * c1) * q;
  r.residual_48 = std::abs(q - r.c2 * std::exp(-a * c1)) / std::max(1.0, std::abs(q));
  const double rhs49 = r.c2 * std::exp(-b * c1);
  r.residual_49 = std::abs(p - rhs49) / std::max(1.0, std::abs(rhs49));
  return r;
}

// Full certificate: root, constant, pole closures and residues.
inline RootCertificate certify(int n, int k, double tol = 1e-14) {
  RootCertificate cert;
  cert.n = n;
  cert.k = k;
  const detail::FindC1Result root = detail::find_c1_impl(n, k, tol, 10000, 10.0);
  cert.bracket_lo = root.bracket_lo;
  cert.bracket_hi = root.bracket_hi;
  cert.c1 = root.root;
  const C2Result c2r = compute_c2(n, k, cert.c1);
  cert.c2 = c2r.c2;
  cert.residual_48 = c2r.residual_48;
  cert.residual_49 = c2r.residual_49;

  detail::CompactDen den(n, k, cert.c1, cert.c2);
  const double a = n - k, b = n + k;
  cert.den_left = den.value(a) / den.scale(a);
  cert.den_right = den.value(b) / den.scale(b);
  const double cpow = std::pow(cert.c1, n + 1);
  cert.residue_left = -cpow * std::pow(a, n - 1) / den.derivative(a);
  cert.residue_right = -cpow * std::pow(b, n - 1) / den.derivative(b);
  return cert;
}

enum class PoleSide { left, right };

// Residue of the t(phi) integrand at phi = n-k (left) or n+k (right),
// computed from the exact derivative of the closed-form denominator.
inline double residue_at(const RootCertificate& cert, PoleSide side) {
  detail::CompactDen den(cert.n, cert.k, cert.c1, cert.c2);
  const double pole = (side == PoleSide::left) ? cert.n - cert.k : cert.n + cert.k;
  const double dv = den.value(pole);
  if (std::abs(dv) > 1e-6 * den.scale(pole))
    throw ProfileDomainError("residue_at: certificate invalid, D(endpoint) != 0");
  return -std::pow(cert.c1, cert.n + 1) * std::pow(pole, cert.n - 1) / den.derivative(pole);
}

struct RicciPositivityReport {
  int samples = 0;
  double min_first = 0.0;   // min over the sweep of phi + c1 phi'
  double min_second = 0.0;  // min of phi' + c1 phi''
  double argmin_first = 0.0;
  double argmin_second = 0.0;
  bool first_positive = false;
  bool second_positive = false;
};

// Evaluators for the compact profile over phi in (n-k, n+k). The t
// parameterization is fixed by the anchor t(n) = 0; both endpoint poles of
// dt/dphi are subtracted globally and reinstated as exact logarithms.
class CompactSoliton {
 public:
  explicit CompactSoliton(int n, int k, double tol = 1e-14)
      : cert_(certify(n, k, tol)), den_(n, k, cert_.c1, cert_.c2) {}

  explicit CompactSoliton(const RootCertificate& cert)
      : cert_(cert), den_(cert.n, cert.k, cert.c1, cert.c2) {}

  const RootCertificate& certificate() const { return cert_; }
  double phi_min() const { return static_cast<double>(cert_.n - cert_.k); }
  double phi_max() const { return static_cast<double>(cert_.n + cert_.k); }

  double phi_prime(double phi) const {
    check_closed(phi);
    if (phi == phi_min() || phi == phi_max()) return 0.0;
    return -den_.value(phi) / (std::pow(cert_.c1, cert_.n + 1) * std::pow(phi, cert_.n - 1));
  }

  // phi'' = phi' [ (n - phi) - ((n-1)/phi + c1) phi' ]
  double phi_second(double phi) const {
    check_interior(phi);
    const double d1 = phi_prime(phi);
    return d1 * ((cert_.n - phi) - bracket(phi) * d1);
  }

  // One t-derivative of the phi'' relation:
  // phi''' = phi''(n - phi) - phi'^2 + (n-1) phi'^3/phi^2 - 2((n-1)/phi + c1) phi' phi''
  double phi_third(double phi) const {
    check_interior(phi);
    const double d1 = phi_prime(phi);
    const double d2 = phi_second(phi);
    return d2 * (cert_.n - phi) - d1 * d1 +
           (cert_.n - 1.0) * d1 * d1 * d1 / (phi * phi) - 2.0 * bracket(phi) * d1 * d2;
  }

  // t(phi) = Int_n^phi dsigma/phi'(sigma), anchor t(n) = 0. The integrand has
  // simple poles at both endpoints with residues +-1/k; J below is the
  // pole-subtracted remainder, continuous on the closed interval. A fixed
  // composite rule keeps t(phi) smooth in phi, so downstream finite
  // differences (Hessian checks, the t-inversion) see no quadrature jitter.
  double t_of_phi(double phi) const {
    check_interior(phi);
    const double a = phi_min(), b = phi_max();
    const double n = static_cast<double>(cert_.n);
    const double ra = 1.0 / cert_.k, rb = -1.0 / cert_.k;
    auto J = [&](double s) { return 1.0 / phi_prime(s) - ra / (s - a) - rb / (s - b); };
    const double core = (phi == n) ? 0.0 : integrate_fixed(J, n, phi, panels_);
    return core + ra * (std::log(phi - a) - std::log(n - a)) +
           rb * (std::log(b - phi) - std::log(b - n));
  }

  // Same integral through the adaptive rule (cross-validation path).
  double t_of_phi_adaptive(double phi, double rel_tol = 1e-12) const {
    check_interior(phi);
    const double a = phi_min(), b = phi_max();
    const double n = static_cast<double>(cert_.n);
    const double ra = 1.0 / cert_.k, rb = -1.0 / cert_.k;
    auto J = [&](double s) { return 1.0 / phi_prime(s) - ra / (s - a) - rb / (s - b); };
    const double core =
        (phi == n) ? 0.0 : integrate_adaptive(J, n, phi, rel_tol, 1e-14).value;
    return core + ra * (std::log(phi - a) - std::log(n - a)) +
           rb * (std::log(b - phi) - std::log(b - n));
  }

  // Potential difference u(phi) - u(n) = Int_n^phi sigma/phi'(sigma) dsigma,
  // with the same pole subtraction (residues a/k and -b/k).
  double u_of_phi(double phi) const {
    check_interior(phi);
    const double a = phi_min(), b = phi_max();
    const double n = static_cast<double>(cert_.n);
    const double ra = a / cert_.k, rb = -b / cert_.k;
    auto J = [&](double s) { return s / phi_prime(s) - ra / (s - a) - rb / (s - b); };
    const double core = (phi == n) ? 0.0 : integrate_fixed(J, n, phi, panels_);
    return core + ra * (std::log(phi - a) - std::log(n - a)) +
           rb * (std::log(b - phi) - std::log(b - n));
  }

  // Monotone inversion of t(phi); Newton with a bisection bracket. Converges
  // on the phi step down to a few ulp so that phi(t) is smooth enough to be
  // finite-differenced (a residual-based stop would leave a tolerance-sized
  // staircase in t).
  double phi_of_t(double t, double tol = 0.0) const {
    (void)tol;
    const double a = phi_min(), b = phi_max();
    double lo = a + 1e-13, hi = b - 1e-13;
    double phi = static_cast<double>(cert_.n);
    for (int it = 0; it < 200; ++it) {
      const double g = t_of_phi(phi) - t;
      if (g > 0.0)
        hi = phi;
      else
        lo = phi;
      double next = phi - g * phi_prime(phi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - phi) <=
          4.0 * std::numeric_limits<double>::epsilon() * std::abs(phi))
        return next;
      phi = next;
    }
    throw NonConvergenceError("phi_of_t: inversion did not converge");
  }

  // Sweep of the two Ricci-positivity quantities f' = phi + c1 phi' and
  // f'' = phi' + c1 phi''. The first is positive for every admissible k;
  // the second only for k = 1.
  RicciPositivityReport ricci_positivity_report(int samples = 2000,
                                                double endpoint_offset = 1e-4) const {
    RicciPositivityReport rep;
    rep.samples = samples;
    const double a = phi_min() + endpoint_offset, b = phi_max() - endpoint_offset;
    for (int i = 0; i < samples; ++i) {
      const double phi = a + (b - a) * static_cast<double>(i) / (samples - 1);
      const double d1 = phi_prime(phi);
      const double d2 = phi_second(phi);
      const double f1 = phi + cert_.c1 * d1;
      const double f2 = d1 + cert_.c1 * d2;
      if (i == 0 || f1 < rep.min_first) {
        rep.min_first = f1;
        rep.argmin_first = phi;
      }
      if (i == 0 || f2 < rep.min_second) {
        rep.min_second = f2;
        rep.argmin_second = phi;
      }
    }
    rep.first_positive = rep.min_first > 0.0;
    rep.second_positive = rep.min_second > 0.0;
    return rep;
  }

 private:
  double bracket(double phi) const { return (cert_.n - 1.0) / phi + cert_.c1; }

  void check_closed(double phi) const {
    if (!(phi >= phi_min() && phi <= phi_max()))
      throw ProfileDomainError("CompactSoliton: phi outside [n-k, n+k]");
  }
  void check_interior(double phi) const {
    if (!(phi > phi_min() && phi < phi_max()))
      throw ProfileDomainError("CompactSoliton: phi outside (n-k, n+k)");
  }

  RootCertificate cert_;
  detail::CompactDen den_;
  int panels_ = 32;
};

// Free-function forms matching the operation surface.
inline double phi_prime_of_phi(const RootCertificate& cert, double phi) {
  return CompactSoliton(cert).phi_prime(phi);
}
inline double phi_second_of_phi(const RootCertificate& cert, double phi) {
  return CompactSoliton(cert).phi_second(phi);
}
inline double t_of_phi(const RootCertificate& cert, double phi) {
  return CompactSoliton(cert).t_of_phi(phi);
}
inline RicciPositivityReport ricci_positivity_report(const RootCertificate& cert,
                                                     int samples = 2000) {
  return CompactSoliton(cert).ricci_positivity_report(samples);
}

}  // namespace krsoliton
