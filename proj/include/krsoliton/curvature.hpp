#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "krsoliton/geometry.hpp"
#include "krsoliton/profile.hpp"
#include "krsoliton/series.hpp"
#include "krsoliton/types.hpp"

namespace krsoliton {

// The five coefficient functions of the curvature tensor at the symmetric
// point P = (z1, 0, ..., 0), plus the assembled components:
//
//   R_{i jbar k lbar} = e^{-2t} { A (d_ij d_kl + d_il d_jk)
//     + B (d_ij d_kl1 + d_il d_jk1 + d_jk d_il1 + d_kl d_ij1)
//     + (C + (phi'-phi'')^2/phi') d_ijkl1
//     + E (d_ij^ d_kl1 + d_il^ d_jk1 + d_jk^ d_il1 + d_kl^ d_ij1) }
//
// with A = phi - phi', B = 3phi' - 2phi - phi'', C = 6phi'' - 11phi' - phi''' + 6phi,
// E = (phi - phi')^2 / phi; d_..1 vanishes unless all its indices equal 1 and
// d_ij^ vanishes unless i = j != 1.
//
// The scaled_* members hold e^{-2t} * coeff and are what the assembly uses.
// The raw coefficients cancel to O(e^{2t})..O(e^{3t}) individually as
// t -> -infinity, so below the series switch (flat case, t <= -20) both sets
// are produced from the tail expansion instead of floating-point differences.
struct CurvatureFrame {
  int n = 1;
  double t = 0.0;
  double prefactor = 1.0;  // e^{-2t}
  double coeff_A = 0.0, coeff_B = 0.0, coeff_C = 0.0, coeff_D = 0.0, coeff_E = 0.0;
  double scaled_A = 0.0, scaled_B = 0.0, scaled_C = 0.0, scaled_D = 0.0, scaled_E = 0.0;

  // R_{i jbar k lbar} at P, zero-based indices (slot "1" is index 0).
  double component(int i, int j, int k, int l) const {
    const double d_ij = (i == j) ? 1.0 : 0.0;
    const double d_kl = (k == l) ? 1.0 : 0.0;
    const double d_il = (i == l) ? 1.0 : 0.0;
    const double d_jk = (j == k) ? 1.0 : 0.0;
    const double d_ij1 = (i == 0 && j == 0) ? 1.0 : 0.0;
    const double d_kl1 = (k == 0 && l == 0) ? 1.0 : 0.0;
    const double d_il1 = (i == 0 && l == 0) ? 1.0 : 0.0;
    const double d_jk1 = (j == 0 && k == 0) ? 1.0 : 0.0;
    const double d_all1 = (i == 0 && j == 0 && k == 0 && l == 0) ? 1.0 : 0.0;
    const double d_ij_h = (i == j && i != 0) ? 1.0 : 0.0;
    const double d_kl_h = (k == l && k != 0) ? 1.0 : 0.0;
    const double d_il_h = (i == l && i != 0) ? 1.0 : 0.0;
    const double d_jk_h = (j == k && j != 0) ? 1.0 : 0.0;
    return scaled_A * (d_ij * d_kl + d_il * d_jk) +
           scaled_B * (d_ij * d_kl1 + d_il * d_jk1 + d_jk * d_il1 + d_kl * d_ij1) +
           (scaled_C + scaled_D) * d_all1 +
           scaled_E * (d_ij_h * d_kl1 + d_il_h * d_jk1 + d_jk_h * d_il1 + d_kl_h * d_ij1);
  }
};

namespace detail {

inline constexpr double kFrameSeriesSwitch = -20.0;

inline CurvatureFrame frame_from_point(const ProfilePoint& p, int n) {
  CurvatureFrame fr;
  fr.n = n;
  fr.t = p.t;
  fr.prefactor = std::exp(-2.0 * p.t);
  fr.coeff_A = p.phi - p.phi1;
  fr.coeff_B = 3.0 * p.phi1 - 2.0 * p.phi - p.phi2;
  fr.coeff_C = 6.0 * p.phi2 - 11.0 * p.phi1 - p.phi3 + 6.0 * p.phi;
  fr.coeff_D = (p.phi1 - p.phi2) * (p.phi1 - p.phi2) / p.phi1;
  fr.coeff_E = (p.phi - p.phi1) * (p.phi - p.phi1) / p.phi;
  fr.scaled_A = fr.prefactor * fr.coeff_A;
  fr.scaled_B = fr.prefactor * fr.coeff_B;
  fr.scaled_C = fr.prefactor * fr.coeff_C;
  fr.scaled_D = fr.prefactor * fr.coeff_D;
  fr.scaled_E = fr.prefactor * fr.coeff_E;
  return fr;
}

// Tail expansion of the scaled coefficients in x = e^t. With
// phi = sum_m a_m x^m:
//   e^{-2t} A = -sum (m-1) a_m x^{m-2}
//   e^{-2t} B = -sum (m-1)(m-2) a_m x^{m-2}
//   e^{-2t} C = -sum (m-1)(m-2)(m-3) a_m x^{m-2}
//   e^{-2t} D = x p(x)^2 / q(x),  p = sum (m - m^2) a_m x^{m-2}, q = sum m a_m x^{m-1}
//   e^{-2t} E = x r(x)^2 / w(x),  r = sum (1 - m) a_m x^{m-2},  w = sum a_m x^{m-1}
inline CurvatureFrame frame_from_series(const TailSeries& a, int n, double t) {
  constexpr int K = kTailOrder;
  const double x = std::exp(t);
  PowerSeries<K> sA, sB, sC, p, q, r, w;
  for (int m = 2; m < K; ++m) {
    const double am = a.c[m];
    sA.c[m - 2] = -(m - 1.0) * am;
    sB.c[m - 2] = -(m - 1.0) * (m - 2.0) * am;
    sC.c[m - 2] = -(m - 1.0) * (m - 2.0) * (m - 3.0) * am;
    p.c[m - 2] = (m - static_cast<double>(m) * m) * am;
    r.c[m - 2] = (1.0 - m) * am;
  }
  for (int m = 1; m < K; ++m) {
    q.c[m - 1] = m * a.c[m];
    w.c[m - 1] = a.c[m];
  }
  const PowerSeries<K> sD = (p * p) * q.reciprocal();
  const PowerSeries<K> sE = (r * r) * w.reciprocal();

  CurvatureFrame fr;
  fr.n = n;
  fr.t = t;
  fr.prefactor = std::exp(-2.0 * t);
  fr.scaled_A = sA.eval(x);
  fr.scaled_B = sB.eval(x);
  fr.scaled_C = sC.eval(x);
  fr.scaled_D = x * sD.eval(x);
  fr.scaled_E = x * sE.eval(x);
  const double e2t = std::exp(2.0 * t);
  fr.coeff_A = fr.scaled_A * e2t;
  fr.coeff_B = fr.scaled_B * e2t;
  fr.coeff_C = fr.scaled_C * e2t;
  fr.coeff_D = fr.scaled_D * e2t;
  fr.coeff_E = fr.scaled_E * e2t;
  return fr;
}

}  // namespace detail

inline CurvatureFrame curvature_frame(const RadialProfile& profile, double t) {
  if (t < -350.0 || t > 350.0)
    throw std::range_error("curvature_frame: e^{+-2t} not representable");
  if (std::holds_alternative<FlatSpace>(profile.kind()) &&
      t <= detail::kFrameSeriesSwitch && !profile.is_perturbed())
    return detail::frame_from_series(profile.tail_series(), profile.dim(), t);
  return detail::frame_from_point(profile.at(t), profile.dim());
}

struct TangentPair {
  std::vector<Complex> v;
  std::vector<Complex> w;
};

namespace detail {

inline Complex wedge_entry(const TangentPair& pr, int i, int j) {
  return pr.v[static_cast<std::size_t>(i)] * std::conj(pr.w[static_cast<std::size_t>(j)]) -
         pr.w[static_cast<std::size_t>(i)] * std::conj(pr.v[static_cast<std::size_t>(j)]);
}

}  // namespace detail

inline bool is_colinear(const TangentPair& pair, double tol = 1e-12) {
  const int n = static_cast<int>(pair.v.size());
  double nv = 0.0, nw = 0.0, m = 0.0;
  for (const auto& c : pair.v) nv += std::norm(c);
  for (const auto& c : pair.w) nw += std::norm(c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::max(m, std::abs(detail::wedge_entry(pair, i, j)));
  return m < tol * std::sqrt(nv * nw);
}

// Sectional curvature of the real 2-plane spanned by X = Re v, Y = Re w at the
// symmetric point with log |z|^2 = t. Numerator contracts the assembled
// tensor; the denominator is the parallelogram area term
// g_{i lbar} g_{k jbar} [ (v^i w^jbar - w^i v^jbar)(w^k v^lbar - v^k w^lbar)
//                        + (v^i w^k - w^i v^k)(v^lbar w^jbar - w^lbar v^jbar) ].
inline double sectional_curvature(const RadialProfile& profile, double t,
                                  const TangentPair& pair) {
  const int n = profile.dim();
  if (static_cast<int>(pair.v.size()) != n || static_cast<int>(pair.w.size()) != n)
    throw std::invalid_argument("sectional_curvature: tangent dimension mismatch");
  if (is_colinear(pair))
    throw DegeneratePlaneError("sectional_curvature: colinear tangent pair");

  const CurvatureFrame fr = curvature_frame(profile, t);
  Complex num(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex f1 = detail::wedge_entry(pair, i, j);
      if (f1 == Complex(0.0)) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rc = fr.component(i, j, k, l);
          if (rc == 0.0) continue;
          num += rc * f1 * std::conj(detail::wedge_entry(pair, l, k));
        }
    }

  const ProfilePoint p = profile.at(t);
  const double g_rad = std::exp(-t) * p.phi1;
  const double g_trv = std::exp(-t) * p.phi;
  double den = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double gi = (i == 0) ? g_rad : g_trv;
      const double gj = (j == 0) ? g_rad : g_trv;
      const double a1 = std::norm(detail::wedge_entry(pair, i, j));
      const Complex vw = pair.v[static_cast<std::size_t>(i)] * pair.w[static_cast<std::size_t>(j)] -
                         pair.w[static_cast<std::size_t>(i)] * pair.v[static_cast<std::size_t>(j)];
      den += gi * gj * (a1 + std::norm(vw));
    }
  return num.real() / den;
}

// Numerator alone, for cross-checks against the reduced two-term form.
inline double sectional_numerator(const RadialProfile& profile, double t,
                                  const TangentPair& pair) {
  const int n = profile.dim();
  const CurvatureFrame fr = curvature_frame(profile, t);
  Complex num(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex f1 = detail::wedge_entry(pair, i, j);
      if (f1 == Complex(0.0)) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rc = fr.component(i, j, k, l);
          if (rc == 0.0) continue;
          num += rc * f1 * std::conj(detail::wedge_entry(pair, l, k));
        }
    }
  return num.real();
}

}  // namespace krsoliton
