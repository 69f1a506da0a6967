#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "krsoliton/compact.hpp"
#include "krsoliton/curvature.hpp"
#include "krsoliton/exactpoly.hpp"
#include "krsoliton/geometry.hpp"
#include "krsoliton/implicit.hpp"
#include "krsoliton/profile.hpp"
#include "krsoliton/types.hpp"

namespace krsoliton {

// One named sub-result. For inequality checks `margin` is the worst (most
// negative) value of the quantity that must stay positive; for identity
// checks it is the worst residual and `tolerance` the allowed size. Records
// with `informational` set report findings without affecting pass/fail.
struct SubCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  double worst_point = 0.0;
  double tolerance = 0.0;
  bool informational = false;
};

struct CheckReport {
  std::string name;
  bool passed = false;
  double margin = 0.0;       // worst-case slack over the sub-checks
  double worst_point = 0.0;  // where it was attained
  std::vector<SubCheck> details;

  void absorb(const SubCheck& s) {
    details.push_back(s);
    if (s.informational) return;
    const double slack = s.tolerance > 0.0 ? s.tolerance - std::abs(s.margin) : s.margin;
    if (details.size() == 1 || slack < margin) {
      margin = slack;
      worst_point = s.worst_point;
    }
    passed = passed && s.passed;
  }
};

namespace detail {

inline CheckReport make_report(const std::string& name) {
  CheckReport r;
  r.name = name;
  r.passed = true;
  r.margin = std::numeric_limits<double>::infinity();
  return r;
}

// Complex Hessian d^2 F / dz^i dzbar^j of a real scalar field on C^n by
// centered finite differences in the 2n real coordinates.
template <class F>
HermitianMatrix complex_hessian_fd(F&& f, const std::vector<Complex>& z, double h) {
  const int n = static_cast<int>(z.size());
  auto eval = [&](int ri, double di, int rj, double dj) {
    std::vector<Complex> p = z;
    auto bump = [&](int r, double d) {
      const int idx = r / 2;
      if (r % 2 == 0)
        p[static_cast<std::size_t>(idx)] += d;
      else
        p[static_cast<std::size_t>(idx)] += Complex(0.0, d);
    };
    bump(ri, di);
    bump(rj, dj);
    return f(p);
  };
  auto second = [&](int ri, int rj) {
    if (ri == rj) {
      const double f0 = eval(ri, 0.0, rj, 0.0);
      return (eval(ri, h, rj, 0.0) - 2.0 * f0 + eval(ri, -h, rj, 0.0)) / (h * h);
    }
    return (eval(ri, h, rj, h) - eval(ri, h, rj, -h) - eval(ri, -h, rj, h) +
            eval(ri, -h, rj, -h)) /
           (4.0 * h * h);
  };
  HermitianMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
      const double re = second(xi, xj) + second(yi, yj);
      const double im = second(xi, yj) - second(yi, xj);
      out.entry(i, j) = 0.25 * Complex(re, im);
    }
  return out;
}

struct Lemma22Margins {
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

inline Lemma22Margins lemma_2_2_sweep(const RadialProfile& profile, const GridSpec& grid) {
  Lemma22Margins m;
  bool first = true;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.point(i);
    const ProfilePoint p = profile.at(t);
    const double v1 = p.phi - p.phi1;
    const double v2 = p.phi1 * p.phi1 - p.phi * p.phi2;
    const double v3 = p.phi2 * p.phi2 - p.phi1 * p.phi3;
    if (first || v1 < m.m1) { m.m1 = v1; m.t1 = t; }
    if (first || v2 < m.m2) { m.m2 = v2; m.t2 = t; }
    if (first || v3 < m.m3) { m.m3 = v3; m.t3 = t; }
    first = false;
  }
  return m;
}

}  // namespace detail

// Soliton equation residual: the analytic Ricci tensor against the
// finite-difference complex Hessian of the generating potential (f for the
// open cases; f - u, with the metric subtracted from the Ricci side, for the
// compact one), plus constancy of the holomorphy ratio.
inline CheckReport check_soliton_identity(const RadialProfile& profile, const GridSpec& grid,
                                          double fd_step = 0.0, double tol = 1e-5) {
  CheckReport rep = detail::make_report("soliton_identity");
  const int n = profile.dim();
  const bool compact = std::holds_alternative<CompactBundle>(profile.kind());
  // the compact potential is quadrature-backed; its eps-level evaluation
  // noise is amplified by 1/h^2, so the step must stay above the noise floor
  if (fd_step == 0.0) fd_step = compact ? 1e-3 : 1e-5;

  const CompactSoliton* cg = profile.compact_geometry();
  auto potential = [&](const std::vector<Complex>& z) {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    const double t = std::log(s);
    const ProfilePoint p = profile.at(t);
    double val = n * t - (n - 1) * std::log(p.phi) - std::log(p.phi1);
    if (compact) val -= cg->u_of_phi(p.phi);
    return val;
  };

  double worst = 0.0, worst_t = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.point(i);
    std::vector<Complex> z(static_cast<std::size_t>(n), Complex(0.0));
    z[0] = std::exp(0.5 * t);
    HermitianMatrix lhs = ricci_tensor(profile, t);
    if (compact) {
      const HermitianMatrix g = metric_at(profile, z);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) lhs.entry(a, b) -= g.entry(a, b);
    }
    const HermitianMatrix rhs = detail::complex_hessian_fd(potential, z, fd_step);
    double res = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) res = std::max(res, std::abs(lhs.entry(a, b) - rhs.entry(a, b)));
    if (res > worst) {
      worst = res;
      worst_t = t;
    }
  }
  rep.absorb({"hessian_matches_ricci", worst <= tol, worst, worst_t, tol, false});

  // holomorphy: variance of the defining ratio over the grid
  double mean = 0.0;
  std::vector<double> ratios;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.point(i);
    const ProfilePoint p = profile.at(t);
    const double f1 = ricci_potential_derivs(p, n).f1;
    const double r = compact ? (f1 - p.phi) / p.phi1 : f1 / p.phi1;
    ratios.push_back(r);
    mean += r;
  }
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size());
  const double var_tol = compact ? 1e-10 : 1e-12;
  rep.absorb({"holomorphy_ratio_constant", var <= var_tol, var, mean, var_tol, false});
  return rep;
}

// Positivity of (phi - phi'), (phi'^2 - phi phi'') and (phi''^2 - phi' phi''')
// over the grid, plus the implication-order consistency (every point with
// positive third margin also has positive first and second).
inline CheckReport check_lemma_2_2(int n, const GridSpec& grid) {
  CheckReport rep = detail::make_report("lemma_2_2");
  const RadialProfile profile = RadialProfile::flat(n, grid.newton_tol);
  const auto m = detail::lemma_2_2_sweep(profile, grid);
  rep.absorb({"phi_minus_phi1_positive", m.m1 > 0.0, m.m1, m.t1, 0.0, false});
  rep.absorb({"phi1sq_minus_phi_phi2_positive", m.m2 > 0.0, m.m2, m.t2, 0.0, false});
  rep.absorb({"phi2sq_minus_phi1_phi3_positive", m.m3 > 0.0, m.m3, m.t3, 0.0, false});

  bool order_ok = true;
  double order_worst = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.point(i);
    const ProfilePoint p = profile.at(t);
    const double v3 = p.phi2 * p.phi2 - p.phi1 * p.phi3;
    if (v3 > 0.0) {
      const double v1 = p.phi - p.phi1;
      const double v2 = p.phi1 * p.phi1 - p.phi * p.phi2;
      if (!(v1 > 0.0 && v2 > 0.0)) {
        order_ok = false;
        order_worst = t;
      }
    }
  }
  rep.absorb({"implication_order", order_ok, order_ok ? 1.0 : -1.0, order_worst, 0.0, false});
  return rep;
}

inline CheckReport check_lemma_2_2(const RadialProfile& profile, const GridSpec& grid) {
  CheckReport rep = detail::make_report("lemma_2_2");
  const auto m = detail::lemma_2_2_sweep(profile, grid);
  rep.absorb({"phi_minus_phi1_positive", m.m1 > 0.0, m.m1, m.t1, 0.0, false});
  rep.absorb({"phi1sq_minus_phi_phi2_positive", m.m2 > 0.0, m.m2, m.t2, 0.0, false});
  rep.absorb({"phi2sq_minus_phi1_phi3_positive", m.m3 > 0.0, m.m3, m.t3, 0.0, false});
  return rep;
}

// The auxiliary function behind the third profile inequality:
//   c(phi) = n phi^{n+1} e^phi + n(n-1) phi^n e^phi
//            - (phi^2 + 2(n-1) phi + n(n-1)) E(phi),
// with E(phi) = e^{n t} eliminated through the implicit relation. Checks the
// vanishing order at 0, the closed third derivative 2n(n-1) phi^{n-2} e^phi
// against finite differences of c'', and positivity of c, c', c'' on (0, 3n].
inline CheckReport check_c_function(int n, const GridSpec& phi_grid) {
  CheckReport rep = detail::make_report("c_function");
  auto E = [&](double phi) {
    return std::exp(detail::log_shifted_series(n, 0.0, std::log(phi)));
  };
  auto c0 = [&](double phi) {
    const double ep = std::exp(phi);
    return n * std::pow(phi, n + 1) * ep + n * (n - 1.0) * std::pow(phi, n) * ep -
           (phi * phi + 2.0 * (n - 1.0) * phi + n * (n - 1.0)) * E(phi);
  };
  auto c2 = [&](double phi) {
    return 2.0 * n * std::pow(phi, n - 1) * std::exp(phi) - 2.0 * E(phi);
  };
  auto c3_closed = [&](double phi) {
    return 2.0 * n * (n - 1.0) * std::pow(phi, n - 2) * std::exp(phi);
  };

  // vanishing order: c scales like phi^{n+1} near zero
  const double eps = 1e-6;
  const double lead = 2.0 * std::pow(eps, n + 1) / (n + 1.0);
  const double c_eps = c0(eps);
  const bool order_ok = (n == 1) ? std::abs(c_eps - eps * eps) <= 1e-8 * eps * eps
                                 : std::abs(c_eps - lead) <= 1e-3 * lead;
  rep.absorb({"vanishing_order_at_zero", order_ok,
              n == 1 ? c_eps - eps * eps : (c_eps - lead) / lead, eps,
              n == 1 ? 1e-8 * eps * eps : 1e-3, false});

  // closed c''' vs centered difference of c''
  double worst = 0.0, worst_phi = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const double phi = 0.2 + (3.0 * n - 0.2) * i / 19.0;
    const double fd = (c2(phi + h) - c2(phi - h)) / (2.0 * h);
    const double cl = c3_closed(phi);
    const double scale = std::max({std::abs(cl), std::abs(c2(phi)), 1.0});
    const double res = std::abs(fd - cl) / scale;
    if (res > worst) {
      worst = res;
      worst_phi = phi;
    }
  }
  const double c3_tol = (n == 1) ? 1e-6 : 1e-6;
  rep.absorb({"third_derivative_closed_form", worst <= c3_tol, worst, worst_phi, c3_tol, false});

  // positivity of c on the requested grid (degenerate-but-positive for n = 1)
  double min_c = 0.0, argmin = 0.0;
  bool first = true;
  for (int i = 0; i < phi_grid.samples; ++i) {
    const double phi = std::max(phi_grid.point(i), 1e-8);
    const double v = c0(phi);
    if (first || v < min_c) {
      min_c = v;
      argmin = phi;
    }
    first = false;
  }
  rep.absorb({"c_positive", min_c > 0.0, min_c, argmin, 0.0, false});
  return rep;
}

// Exact-arithmetic suite for the compact root bracket: derivative zeros at 0,
// positivity of h^{(n+1)}, the boundary sign, root uniqueness and the power
// series structure. The two monotonicity statements that fail in exact
// arithmetic are reported as informational findings (see the test suite for
// the pinned counterexamples).
inline CheckReport check_lemma_4_1(int n, int k) {
  CheckReport rep = detail::make_report("lemma_4_1");
  const PolyExpPair h = build_h(n, k);

  bool zeros_ok = true;
  int bad_i = -1;
  for (int i = 0; i <= n; ++i) {
    if (h_derivative_at_zero(h, i) != 0) {
      zeros_ok = false;
      bad_i = i;
      break;
    }
  }
  rep.absorb({"derivatives_vanish_at_zero_exact", zeros_ok, zeros_ok ? 0.0 : 1.0,
              static_cast<double>(bad_i), 0.0, false});

  // h^{(n+1)}(x) = e^{2kx} p_{n+1}(x): the recurrence polynomial must equal
  // the closed alternating-sum coefficients, which must all be positive.
  const PolyExpPair hn1 = h_derivative(h, n + 1);
  const auto C = h_n1_coefficients(n, k);
  bool coeffs_match = true;
  for (int i = 0; i <= n; ++i)
    if (hn1.p.c[static_cast<std::size_t>(i)] != C[static_cast<std::size_t>(i)]) coeffs_match = false;
  bool q_gone = true;
  for (const auto& qc : hn1.q.c)
    if (qc != 0) q_gone = false;
  rep.absorb({"recurrence_matches_closed_coefficients", coeffs_match && q_gone,
              coeffs_match && q_gone ? 0.0 : 1.0, 0.0, 0.0, false});
  bool cpos = true;
  for (const auto& ci : C)
    if (!(ci > 0)) cpos = false;
  rep.absorb({"hn1_coefficients_positive_exact", cpos, cpos ? 1.0 : -1.0, 0.0, 0.0, false});

  // sampled positivity of h^{(n+1)} on [0,5]: exact rational sign
  bool sample_pos = true;
  double bad_x = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Rational x(i, 10);  // 0, 0.1, ..., 4.9
    if (!(hn1.p.eval(x) > 0)) {
      sample_pos = false;
      bad_x = x.get_d();
    }
  }
  rep.absorb({"hn1_positive_sampled", sample_pos, sample_pos ? 1.0 : -1.0, bad_x, 0.0, false});

  // boundary sign: (-1)^n p(-1) = (n+k)^n and (-1)^n q(-1) = (n-k)^n exactly,
  // then e^{-2k}(n+k)^n > (n-k)^n via logarithms.
  const Rational sign((n % 2 == 0) ? 1 : -1);
  const bool pid = sign * h.p.eval(Rational(-1)) == detail::rat_pow(Rational(n + k), n);
  const bool qid = sign * h.q.eval(Rational(-1)) == detail::rat_pow(Rational(n - k), n);
  const double gap = n * (std::log(static_cast<double>(n + k)) -
                          std::log(static_cast<double>(n - k))) - 2.0 * k;
  rep.absorb({"boundary_identities_exact", pid && qid, pid && qid ? 0.0 : 1.0, -1.0, 0.0, false});
  rep.absorb({"boundary_sign", gap > 0.0, gap, -1.0, 0.0, false});

  // uniqueness scan happens inside find_c1 (throws if violated)
  bool root_ok = true;
  double c1 = 0.0;
  try {
    c1 = find_c1(n, k);
  } catch (const NonConvergenceError&) {
    root_ok = false;
  }
  rep.absorb({"unique_root_in_m1_0", root_ok && c1 > -1.0 && c1 < 0.0, c1, c1, 0.0, false});

  // series structure: positive leading block, then a single sign change
  const auto b = g_series_coefficients(n, k, 40);
  int lead = 0;
  while (lead < static_cast<int>(b.size()) && b[static_cast<std::size_t>(lead)] > 0) ++lead;
  bool single = lead >= 1;
  for (int i = lead; i < static_cast<int>(b.size()); ++i)
    if (!(b[static_cast<std::size_t>(i)] < 0)) single = false;
  rep.absorb({"series_single_sign_change_exact", single, static_cast<double>(lead),
              static_cast<double>(n + 1 + lead), 0.0, false});

  // findings: first failures of the two monotonicity statements, if any
  int b_violation = -1;
  for (int i = 0; i + 1 < static_cast<int>(b.size()); ++i)
    if (!(b[static_cast<std::size_t>(i + 1)] < b[static_cast<std::size_t>(i)])) {
      b_violation = n + 1 + i;
      break;
    }
  rep.absorb({"finding_b_sequence_first_nondecreasing_index", b_violation < 0,
              static_cast<double>(b_violation), static_cast<double>(b_violation), 0.0, true});

  int Bi = -1, Bj = -1;
  for (int i = 0; i <= n && Bi < 0; ++i) {
    const auto B = h_n1_B_row(n, k, i);
    for (int j = 0; j + 1 < static_cast<int>(B.size()); ++j)
      if (!(B[static_cast<std::size_t>(j + 1)] > B[static_cast<std::size_t>(j)])) {
        Bi = i;
        Bj = j;
        break;
      }
  }
  rep.absorb({"finding_B_row_first_nonincreasing", Bi < 0, static_cast<double>(Bi),
              static_cast<double>(Bj), 0.0, true});
  return rep;
}

// Convergence of the asymptotic quantities. Windows are relative to n (the
// deviations are O((n-1)/t) and O((n-1) log t / t)); the volume and scalar
// curvature ratios use the 5% two-point window.
inline CheckReport check_asymptotics(const RadialProfile& profile) {
  if (std::holds_alternative<CompactBundle>(profile.kind()))
    throw std::invalid_argument("check_asymptotics: open cases only");
  CheckReport rep = detail::make_report("asymptotics");
  const int n = profile.dim();
  const double t1 = 100.0, t2 = 200.0;
  const ProfilePoint p1 = profile.at(t1);
  const ProfilePoint p2 = profile.at(t2);

  const double rate1 = std::abs(p1.phi / t1 - n);
  const double rate2 = std::abs(p2.phi / t2 - n);
  rep.absorb({"phi_over_t_window", rate1 < 0.15 * n, rate1, t1, 0.15 * n, false});
  rep.absorb({"phi_over_t_improves", rate2 < rate1 || rate1 <= 1e-12,
              rate1 - rate2, t2, 0.0, false});
  const double d1 = std::abs(p1.phi1 - n);
  rep.absorb({"phi_prime_window", d1 < 0.01 * n, d1, t1, 0.01 * n, false});

  // volume ratio: the two-point change grows roughly linearly in n (it is a
  // log t / t correction raised to the n-th power), so the 5% window is
  // asserted where the claim is made (n <= 3) and reported above that
  const double v1 = volume_growth(profile, t1);
  const double v2 = volume_growth(profile, t2);
  const double dv = std::abs(v2 - v1) / std::abs(v1);
  rep.absorb({"volume_ratio_window", dv < 0.05, dv, t2, 0.05, n > 3});

  // scalar decay: the 1/rho law needs n >= 2 (the n = 1 curvature decays
  // exponentially and R*rho is noise at these radii)
  if (n >= 2) {
    const double r1 = scalar_curvature(profile, t1) * distance(profile, t1);
    const double r2 = scalar_curvature(profile, t2) * distance(profile, t2);
    const double dr = std::abs(r2 - r1) / std::abs(r1);
    rep.absorb({"scalar_decay_window", dr < 0.05, dr, t2, 0.05, false});
  }
  return rep;
}

}  // namespace krsoliton
