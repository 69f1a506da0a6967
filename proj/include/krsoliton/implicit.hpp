#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "krsoliton/types.hpp"

namespace krsoliton {

namespace detail {

// P(n, phi) = sum_{k=0}^{n-1} (-1)^{n-1-k} (n!/k!) phi^k, so the closed-form
// left side of the implicit profile equation is S(n, phi) = e^phi P(n, phi).
// Coefficients satisfy c_{n-1} = n and c_{k-1} = -k c_k.
inline double lhs_poly(int n, double phi) {
  double c = static_cast<double>(n);
  double acc = c;
  for (int k = n - 1; k >= 1; --k) {
    c = -static_cast<double>(k) * c;
    acc = acc * phi + c;
  }
  return acc;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Below this value of phi the shifted left side is evaluated by the positive
// termwise series; above it the closed form has no harmful cancellation.
inline constexpr double kSeriesSwitch = 35.0;

// log of F(delta) = S(n, base+delta) - S(n, base)
//                 = n e^base * Int_0^delta (base+x)^{n-1} e^x dx,
// series branch (valid for base+delta <= kSeriesSwitch). All terms are
// positive, so the evaluation keeps full relative accuracy down to
// delta near the underflow limit; log_delta may therefore be very negative.
inline double log_shifted_series(int n, double base, double log_delta) {
  const double delta = std::exp(log_delta);
  if (base == 0.0) {
    // F = delta^n * T(delta), T = sum_m n delta^m / (m! (n+m)), T(0) = 1
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 600; ++m) {
      term *= delta / static_cast<double>(m);
      const double add = static_cast<double>(n) * term / static_cast<double>(n + m);
      sum += add;
      if (add < sum * 1e-18) break;
    }
    return static_cast<double>(n) * log_delta + std::log(sum);
  }
  // F = n e^base delta * G, G = sum_j C(n-1,j) base^{n-1-j} delta^j g_j(delta),
  // g_j = sum_m delta^m / (m! (j+m+1)). Underflow of delta^j only drops terms
  // that are negligible against the j = 0 one.
  double G = 0.0;
  double coef = std::pow(base, n - 1);  // C(n-1,j) base^{n-1-j}, starting at j=0
  double dj = 1.0;                      // delta^j
  for (int j = 0; j < n; ++j) {
    double term = 1.0;
    double gj = 1.0 / static_cast<double>(j + 1);
    for (int m = 1; m < 600; ++m) {
      term *= delta / static_cast<double>(m);
      const double add = term / static_cast<double>(j + m + 1);
      gj += add;
      if (add < gj * 1e-18) break;
    }
    G += coef * dj * gj;
    if (j + 1 < n) {
      coef *= static_cast<double>(n - 1 - j) / (static_cast<double>(j + 1) * base);
      dj *= delta;
    }
  }
  return std::log(static_cast<double>(n)) + base + log_delta + std::log(G);
}

// log S(n, phi) for phi above every root of P (true for phi >= kSeriesSwitch
// whenever n <= 30, since P > 0 beyond its largest root < n).
inline double log_S(int n, double phi) { return phi + std::log(lhs_poly(n, phi)); }

inline double log_shifted_closed(int n, double base, double phi) {
  const double ls = log_S(n, phi);
  double log_c, sign_c;
  if (base > kSeriesSwitch - 1.0) {
    const double p = lhs_poly(n, base);
    log_c = base + std::log(std::abs(p));
    sign_c = p >= 0.0 ? 1.0 : -1.0;
  } else {
    const double c = std::exp(base) * lhs_poly(n, base);
    if (c == 0.0) return ls;
    log_c = std::log(std::abs(c));
    sign_c = c >= 0.0 ? 1.0 : -1.0;
  }
  return ls + std::log1p(-sign_c * std::exp(log_c - ls));
}

inline double log_shifted_lhs(int n, double base, double log_delta) {
  const double phi = base + std::exp(log_delta);
  if (phi <= kSeriesSwitch) return log_shifted_series(n, base, log_delta);
  return log_shifted_closed(n, base, phi);
}

// Linear-space value of the shifted left side (series branch only). Same
// positive-term sums as log_shifted_series without the final logarithm.
inline double shifted_series_value(int n, double base, double delta) {
  if (base == 0.0) {
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 600; ++m) {
      term *= delta / static_cast<double>(m);
      const double add = static_cast<double>(n) * term / static_cast<double>(n + m);
      sum += add;
      if (add < sum * 1e-18) break;
    }
    return std::pow(delta, n) * sum;
  }
  double G = 0.0;
  double coef = std::pow(base, n - 1);
  double dj = 1.0;
  for (int j = 0; j < n; ++j) {
    double term = 1.0;
    double gj = 1.0 / static_cast<double>(j + 1);
    for (int m = 1; m < 600; ++m) {
      term *= delta / static_cast<double>(m);
      const double add = term / static_cast<double>(j + m + 1);
      gj += add;
      if (add < gj * 1e-18) break;
    }
    G += coef * dj * gj;
    if (j + 1 < n) {
      coef *= static_cast<double>(n - 1 - j) / (static_cast<double>(j + 1) * base);
      dj *= delta;
    }
  }
  return static_cast<double>(n) * std::exp(base) * delta * G;
}

// d(log F)/d(psi) with psi = log delta: delta * n phi^{n-1} e^phi / F,
// evaluated through exponent differences so large phi cannot overflow.
inline double dlog_shifted_dpsi(int n, double base, double psi, double log_f) {
  const double delta = std::exp(psi);
  const double phi = base + delta;
  const double expo = std::log(static_cast<double>(n)) +
                      static_cast<double>(n - 1) * std::log(phi) + phi + psi - log_f;
  return std::exp(expo);
}

struct ShiftedSolve {
  double phi = 0.0;
  double delta = 0.0;
  int iterations = 0;
};

// Final Newton steps in linear space. The log-space solve cannot converge
// past eps*|nt| relative (exponent rounding); where e^{nt} and the series
// value are representable, two linear steps bring delta to a few ulp, which
// the deep-tail inequality margins rely on.
inline double polish(int n, double base, double delta, double nt) {
  const double phi0 = base + delta;
  if (!(nt > -740.0 && nt < 700.0) || phi0 > kSeriesSwitch) return delta;
  if (base == 0.0 && static_cast<double>(n) * std::log(delta) < -740.0) return delta;
  const double target = std::exp(nt);
  for (int i = 0; i < 2; ++i) {
    const double phi = base + delta;
    const double f = shifted_series_value(n, base, delta) - target;
    const double df = static_cast<double>(n) * std::pow(phi, n - 1) * std::exp(phi);
    const double step = f / df;
    if (!std::isfinite(step)) return delta;
    delta -= step;
    if (!(delta > 0.0)) return delta + step;
  }
  return delta;
}

// Solve S(n, base+delta) - S(n, base) = e^{n t} for delta > 0.
// Newton on psi = log delta applied to G(psi) = log F(psi) - n t, which is
// strictly increasing (dG/dpsi in (0, n]); a bisection bracket guards every
// step. The log formulation covers both tails: delta down to the subnormal
// range and n*t far beyond the overflow point of e^{n t}.
inline ShiftedSolve solve_shifted(int n, double base, double t, double tol, int max_iter) {
  if (n < 1) throw std::invalid_argument("solver: n >= 1 required");
  if (!(tol > 0.0)) throw std::invalid_argument("solver: tol > 0 required");
  const double nt = static_cast<double>(n) * t;
  if (nt > 1.0e9)
    throw std::range_error("solver: n*t exceeds log-space capacity");
  if (!std::isfinite(t)) throw std::invalid_argument("solver: t must be finite");

  auto G = [&](double psi) { return log_shifted_lhs(n, base, psi) - nt; };

  // initial bracket; expand if the growth estimate is ever too tight
  double hi_delta = static_cast<double>(n) * std::max(t, 1.0) + static_cast<double>(n) * n + 1.0;
  double psi_hi = std::log(hi_delta);
  double g_hi = G(psi_hi);
  for (int i = 0; g_hi < 0.0; ++i) {
    if (i > 300) throw NonConvergenceError("solver: no upper bracket");
    psi_hi += 0.7;
    g_hi = G(psi_hi);
  }
  double psi_lo = std::min(t - 1.0, psi_hi - 1.0);
  double g_lo = G(psi_lo);
  for (int i = 0; g_lo > 0.0; ++i) {
    if (psi_lo <= -744.0) {
      // delta below the representable range; phi == base to double precision
      return {base + std::exp(-744.0), std::exp(-744.0), 0};
    }
    if (i > 300) throw NonConvergenceError("solver: no lower bracket");
    psi_lo = std::max(psi_lo - 16.0, -744.0);
    g_lo = G(psi_lo);
  }

  const double conv = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(1.0, std::abs(nt)));
  double psi = 0.5 * (psi_lo + psi_hi);
  ShiftedSolve out;
  for (int it = 0; it < max_iter; ++it) {
    const double g = G(psi);
    out.iterations = it + 1;
    if (std::abs(g) <= conv) {
      out.delta = polish(n, base, std::exp(psi), nt);
      out.phi = base + out.delta;
      return out;
    }
    if (g > 0.0)
      psi_hi = psi;
    else
      psi_lo = psi;
    const double dg = dlog_shifted_dpsi(n, base, psi, g + nt);
    double next = psi - g / dg;
    if (!(next > psi_lo && next < psi_hi)) next = 0.5 * (psi_lo + psi_hi);
    psi = next;
  }
  throw NonConvergenceError("solver: Newton did not converge within max_iter");
}

}  // namespace detail

// Closed-form left side of the implicit profile equation,
// S(n, phi) = sum_{k=0}^{n-1} (-1)^{n-k-1} (n!/k!) phi^k e^phi.
// Strictly increasing in phi (dS/dphi = n phi^{n-1} e^phi).
inline double implicit_lhs(int n, double phi) {
  if (n < 1) throw std::invalid_argument("implicit_lhs: n >= 1 required");
  if (phi < 0.0) throw ProfileDomainError("implicit_lhs: phi >= 0 required");
  if (phi > 700.0) throw std::range_error("implicit_lhs: e^phi not representable");
  return std::exp(phi) * detail::lhs_poly(n, phi);
}

// d/dphi of implicit_lhs (the telescoped form).
inline double implicit_lhs_derivative(int n, double phi) {
  return static_cast<double>(n) * std::pow(phi, n - 1) * std::exp(phi);
}

// Integration constant of the flat-space equation, C = (-1)^{n-1} n!.
inline double flat_constant(int n) {
  const double f = detail::factorial(n);
  return (n % 2 == 1) ? f : -f;
}

// Integration constant of the bundle equation, C(a) = S(n, a).
inline double bundle_constant(int n, double a) { return implicit_lhs(n, a); }

// Unique phi > 0 with S(n, phi) = e^{n t} + (-1)^{n-1} n!.
inline double solve_phi_flat(int n, double t, double tol = 1e-12, int max_iter = 100) {
  return detail::solve_shifted(n, 0.0, t, tol, max_iter).phi;
}

// Unique phi > a with S(n, phi) = e^{n t} + S(n, a).
inline double solve_phi_bundle(int n, double a, double t, double tol = 1e-12,
                               int max_iter = 100) {
  if (n < 2) throw std::invalid_argument("solve_phi_bundle: n >= 2 required");
  if (!(a > 0.0)) throw std::invalid_argument("solve_phi_bundle: a > 0 required");
  return detail::solve_shifted(n, a, t, tol, max_iter).phi;
}

// The gap phi - a at full relative precision. In the deep tail the gap falls
// below the resolution of phi itself (a + gap rounds to a), so callers that
// need the boundary rate use this instead of differencing.
inline double solve_phi_bundle_gap(int n, double a, double t, double tol = 1e-12,
                                   int max_iter = 100) {
  if (n < 2) throw std::invalid_argument("solve_phi_bundle_gap: n >= 2 required");
  if (!(a > 0.0)) throw std::invalid_argument("solve_phi_bundle_gap: a > 0 required");
  return detail::solve_shifted(n, a, t, tol, max_iter).delta;
}

// Derivatives of the open-case profiles at (t, phi):
//   phi'   = e^{n t} / (phi^{n-1} e^phi), evaluated in log space,
//   phi''  = n phi' - phi'^2 - (n-1) phi'^2 / phi,
//   phi''' = n^2 phi' - 3n phi'^2 + 2 phi'^3
//            - 3n(n-1) phi'^2/phi + 4(n-1) phi'^3/phi + (n-1)(2n-1) phi'^3/phi^2.
// The cubic numerator in the last term is forced by differentiating the phi''
// recurrence; it is also the unique choice reproducing the closed form of
// (phi'')^2 - phi' phi'''.
struct PhiDerivs {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};

inline PhiDerivs phi_derivatives(int n, double t, double phi) {
  if (!(phi > 0.0)) throw ProfileDomainError("phi_derivatives: phi > 0 required");
  const double nt = static_cast<double>(n) * t;
  const double lden = static_cast<double>(n - 1) * std::log(phi) + phi;
  // The linear-space quotient keeps phi' at a few ulp; the log-space form
  // loses eps*|nt| relative accuracy to exponent rounding, which the
  // deep-tail inequality margins (cancelling to O(e^{3t})) cannot afford.
  double d1;
  if (nt > -700.0 && nt < 700.0 && lden > -700.0 && lden < 700.0)
    d1 = std::exp(nt) / (std::pow(phi, n - 1) * std::exp(phi));
  else
    d1 = std::exp(nt - lden);
  double d2 = n * d1 - d1 * d1;
  double d3 = static_cast<double>(n) * n * d1 - 3.0 * n * d1 * d1 + 2.0 * d1 * d1 * d1;
  if (n > 1) {
    const double m = static_cast<double>(n - 1);
    d2 -= m * d1 * d1 / phi;
    d3 += m * (-3.0 * n * d1 * d1 / phi + 4.0 * d1 * d1 * d1 / phi +
               (2.0 * n - 1.0) * d1 * d1 * d1 / (phi * phi));
  }
  return {d1, d2, d3};
}

inline PhiDerivs phi_derivatives(const SolitonKind& kind, double t, double phi) {
  validate(kind);
  if (std::holds_alternative<CompactBundle>(kind))
    throw std::invalid_argument("phi_derivatives: open cases only");
  return phi_derivatives(complex_dim(kind), t, phi);
}

}  // namespace krsoliton
