#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "krsoliton/curvature.hpp"
#include "krsoliton/geometry.hpp"
#include "krsoliton/profile.hpp"
#include "oracles.hpp"

using namespace krsoliton;

namespace {

Eigen::MatrixXcd to_eigen(const HermitianMatrix& m) {
  Eigen::MatrixXcd out(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m.entry(i, j);
  return out;
}

std::vector<Complex> random_point(int n, std::mt19937_64& rng, double tmin, double tmax) {
  std::uniform_real_distribution<double> ut(tmin, tmax);
  auto z = oracles::random_unit_vector(n, rng);
  const double r = std::exp(0.5 * ut(rng));
  for (auto& c : z) c *= r;
  return z;
}

// Finite-difference complex first derivative of a matrix-valued field.
template <class F>
Eigen::MatrixXcd d_dz(F&& f, std::vector<Complex> z, int k, double h, bool bar) {
  auto at = [&](double dx, double dy) {
    std::vector<Complex> p = z;
    p[static_cast<std::size_t>(k)] += Complex(dx, dy);
    return f(p);
  };
  const Eigen::MatrixXcd dre = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
  const Eigen::MatrixXcd dim = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
  const Complex unit = bar ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
  return 0.5 * (dre + unit * dim);
}

}  // namespace

TEST_CASE("metric_at: cigar scalar value and identity limit") {
  const RadialProfile cigar = RadialProfile::flat(1);
  const HermitianMatrix g = metric_at(cigar, {Complex(1.0, 0.0)});
  CHECK(std::abs(g.entry(0, 0) - Complex(0.5)) < 1e-12);

  // |z|^2 -> 0: metric approaches the identity (e^{-t} phi -> a1 = 1)
  const RadialProfile prof = RadialProfile::flat(3);
  const HermitianMatrix g0 =
      metric_at(prof, {Complex(1e-8, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0)});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(g0.entry(i, j) - (i == j ? Complex(1.0) : Complex(0.0))) < 1e-7);

  CHECK_THROWS_AS(metric_at(prof, std::vector<Complex>(3, Complex(0.0))), ProfileDomainError);
}

TEST_CASE("metric eigenvalues: e^{-t} phi (times n-1) and e^{-t} phi'") {
  std::mt19937_64 rng(11);
  for (int n : {2, 4}) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto z = random_point(n, rng, -3.0, 3.0);
      double s = 0.0;
      for (const auto& c : z) s += std::norm(c);
      const double t = std::log(s);
      const ProfilePoint p = prof.at(t);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(metric_at(prof, z)));
      const auto ev = es.eigenvalues();
      // n-1 copies of e^{-t} phi and one radial e^{-t} phi' (phi' < phi here)
      CHECK(std::abs(ev(0) - std::exp(-t) * p.phi1) < 1e-10 * std::exp(-t) * p.phi);
      for (int i = 1; i < n; ++i)
        CHECK(std::abs(ev(i) - std::exp(-t) * p.phi) < 1e-10 * std::exp(-t) * p.phi);
      CHECK(ev(0) > 0.0);
    }
  }
}

TEST_CASE("metric positive definite across kinds and points") {
  std::mt19937_64 rng(13);
  std::vector<RadialProfile> profiles;
  profiles.push_back(RadialProfile::flat(3));
  profiles.push_back(RadialProfile::bundle(3, 1.0));
  profiles.push_back(RadialProfile::compact(3, 1));
  for (const auto& prof : profiles) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto z = random_point(3, rng, -2.0, 2.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(metric_at(prof, z)));
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("metric_inverse: product is the identity at random points") {
  std::mt19937_64 rng(17);
  for (int n : {1, 2, 3, 4, 5}) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto z = random_point(n, rng, -4.0, 4.0);
      const HermitianMatrix g = metric_at(prof, z);
      const HermitianMatrix gi = metric_inverse(prof, z);
      // contraction sum_j g(i,j) * ginv(k,j) = delta_ik
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          Complex acc(0.0);
          for (int j = 0; j < n; ++j) acc += g.entry(i, j) * gi.entry(k, j);
          worst = std::max(worst, std::abs(acc - (i == k ? Complex(1.0) : Complex(0.0))));
        }
      CHECK(worst < 1e-12);
    }
  }

  // cigar closed value and the rank-one coefficient identity
  const RadialProfile cigar = RadialProfile::flat(1);
  const HermitianMatrix gi = metric_inverse(cigar, {Complex(1.0, 0.0)});
  CHECK(std::abs(gi.entry(0, 0) - Complex(2.0)) < 1e-12);
}

TEST_CASE("metric_det: closed form against the dense determinant") {
  std::mt19937_64 rng(19);
  for (int n : {1, 2, 3, 4}) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (int trial = 0; trial < 20; ++trial) {
      const auto z = random_point(n, rng, -4.0, 4.0);
      double s = 0.0;
      for (const auto& c : z) s += std::norm(c);
      const double t = std::log(s);
      const double closed = metric_det(prof, t);
      const double dense = to_eigen(metric_at(prof, z)).determinant().real();
      CHECK(std::abs(closed - dense) <= 1e-10 * std::abs(dense));
    }
  }
  // cigar at t = 0 and the deep-tail limit
  CHECK(std::abs(metric_det(RadialProfile::flat(1), 0.0) - 0.5) < 1e-12);
  CHECK(std::abs(metric_det(RadialProfile::flat(3), -40.0) - 1.0) < 1e-12);
}

TEST_CASE("ricci potential: f' = phi' for the open cases, f' = phi + c1 phi' compact") {
  const RadialProfile flat = RadialProfile::flat(2);
  for (double t : {-10.0, -1.0, 0.0, 2.0, 10.0}) {
    const ProfilePoint p = flat.at(t);
    const PotentialDerivs f = ricci_potential_derivs(flat, t);
    CHECK(std::abs(f.f1 - p.phi1) < 1e-10 * std::max(1.0, p.phi1));
    CHECK(std::abs(f.f2 - p.phi2) < 1e-9 * std::max(1.0, std::abs(p.phi2)));
  }
  const RadialProfile comp = RadialProfile::compact(2, 1);
  const double c1 = comp.compact_geometry()->certificate().c1;
  for (double t : {-2.0, 0.0, 1.5}) {
    const ProfilePoint p = comp.at(t);
    const PotentialDerivs f = ricci_potential_derivs(comp, t);
    CHECK(std::abs(f.f1 - (p.phi + c1 * p.phi1)) < 1e-9);
  }

  // reported value is normalized to f(0) = 0 and matches -log det up to that
  CHECK(ricci_potential(flat, 0.0) == 0.0);
  const double f3 = ricci_potential(flat, 3.0);
  CHECK(std::abs(f3 - (-std::log(metric_det(flat, 3.0)) + std::log(metric_det(flat, 0.0)))) <
        1e-11);
}

TEST_CASE("soliton vector field: radial with constant holomorphy ratio") {
  const RadialProfile flat = RadialProfile::flat(3);
  // vanishes at the origin
  const auto v0 = soliton_vector_field(flat, std::vector<Complex>(3, Complex(0.0)));
  for (const auto& c : v0) CHECK(std::abs(c) == 0.0);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto z = random_point(3, rng, -5.0, 5.0);
    const auto v = soliton_vector_field(flat, z);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(v[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(i)]) <
            1e-8 * std::abs(z[static_cast<std::size_t>(i)]) + 1e-12);
  }

  // compact: (f' - phi)/phi' = c1 at 20 samples
  const RadialProfile comp = RadialProfile::compact(2, 1);
  const double c1 = comp.compact_geometry()->certificate().c1;
  for (int i = 0; i < 20; ++i) {
    const double t = -2.0 + 4.0 * i / 19.0;
    const ProfilePoint p = comp.at(t);
    const double ratio = (ricci_potential_derivs(p, 2).f1 - p.phi) / p.phi1;
    CHECK(std::abs(ratio - c1) < 1e-6);
  }
}

TEST_CASE("curvature frame: Kahler symmetries and cigar reduction") {
  const RadialProfile prof = RadialProfile::flat(3);
  const CurvatureFrame fr = curvature_frame(prof, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(fr.component(i, j, k, l) == fr.component(k, j, i, l));
          CHECK(fr.component(i, j, k, l) == fr.component(i, l, k, j));
        }

  // cigar holomorphic sectional curvature: R_1111 = e^{-2t} phi'^2 (1 - phi')
  const RadialProfile cigar = RadialProfile::flat(1);
  for (double t : {-3.0, 0.0, 2.0}) {
    const ProfilePoint p = cigar.at(t);
    const CurvatureFrame f1 = curvature_frame(cigar, t);
    const double expect = std::exp(-2.0 * t) * p.phi1 * p.phi1 * (1.0 - p.phi1);
    CHECK(std::abs(f1.component(0, 0, 0, 0) - expect) < 1e-10 * std::abs(expect));
  }
}

TEST_CASE("curvature frame against the finite-difference general formula") {
  std::mt19937_64 rng(29);
  const int n = 2;
  const RadialProfile prof = RadialProfile::flat(n);
  auto metric = [&](const std::vector<Complex>& z) { return to_eigen(metric_at(prof, z)); };
  const double h = 1e-4;
  std::uniform_real_distribution<double> ut(-1.0, 1.0);

  for (int trial = 0; trial < 10; ++trial) {
    const double t = ut(rng);
    std::vector<Complex> z(static_cast<std::size_t>(n), Complex(0.0));
    z[0] = std::exp(0.5 * t);
    const CurvatureFrame fr = curvature_frame(prof, t);

    // R_{i jbar k lbar} = -d^2 g_{i jbar}/dz^k dzbar^l
    //                     + g^{p qbar} (dg_{i qbar}/dz^k)(dg_{p jbar}/dzbar^l)
    const HermitianMatrix gi = metric_inverse(prof, z);
    std::vector<Eigen::MatrixXcd> dk(static_cast<std::size_t>(n)), dl(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      dk[static_cast<std::size_t>(k)] = d_dz(metric, z, k, h, false);
      dl[static_cast<std::size_t>(k)] = d_dz(metric, z, k, h, true);
    }
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            auto gkl = [&](const std::vector<Complex>& zz) {
              Eigen::MatrixXcd m = metric(zz);
              Eigen::MatrixXcd one(1, 1);
              one(0, 0) = m(i, j);
              return one;
            };
            auto d2 = d_dz(
                [&](const std::vector<Complex>& zz) {
                  return d_dz(gkl, zz, l, h, true);  // dg_{i jbar}/dzbar^l at zz
                },
                z, k, h, false);
            Complex corr(0.0);
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q)
                corr += gi.entry(p, q) * dk[static_cast<std::size_t>(k)](i, q) *
                        dl[static_cast<std::size_t>(l)](p, j);
            const Complex fd = -d2(0, 0) + corr;
            const double closed = fr.component(i, j, k, l);
            worst = std::max(worst, std::abs(fd - closed));
            scale = std::max(scale, std::abs(closed));
          }
    CHECK(worst <= 1e-4 * std::max(scale, 1.0));
  }
}

TEST_CASE("origin limit of the curvature frame matches -a2 (dd + dd)") {
  for (int n : {1, 2, 3}) {
    const RadialProfile prof = RadialProfile::flat(n);
    const CurvatureFrame fr = curvature_frame(prof, -40.0);
    const double a2 = series_coefficients(n).a2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double expect =
                -a2 * (((i == j && k == l) ? 1.0 : 0.0) + ((i == l && j == k) ? 1.0 : 0.0));
            CHECK(std::abs(fr.component(i, j, k, l) - expect) < 1e-3);
          }
  }
}

TEST_CASE("frame series path joins the direct path smoothly") {
  const RadialProfile prof = RadialProfile::flat(2);
  // compare the series evaluation against the direct one where both are sound
  const CurvatureFrame direct = detail::frame_from_point(prof.at(-10.0), 2);
  const CurvatureFrame series = detail::frame_from_series(prof.tail_series(), 2, -10.0);
  CHECK(std::abs(direct.scaled_A - series.scaled_A) < 1e-6 * std::abs(series.scaled_A));
  CHECK(std::abs(direct.scaled_B - series.scaled_B) < 1e-4 * std::abs(series.scaled_B));
  CHECK(std::abs(direct.scaled_D - series.scaled_D) < 1e-6 * std::abs(series.scaled_D));
  CHECK(std::abs(direct.scaled_E - series.scaled_E) < 1e-6 * std::abs(series.scaled_E));
}

TEST_CASE("sectional curvature: positivity, reduction identity, invariance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ut(-10.0, 10.0);
  for (int n : {2, 3, 4}) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (int trial = 0; trial < 100; ++trial) {
      TangentPair pair{oracles::random_unit_vector(n, rng), oracles::random_unit_vector(n, rng)};
      const double t = ut(rng);
      CHECK(sectional_curvature(prof, t, pair) > 0.0);
    }
  }

  // colinear pair is rejected
  const RadialProfile prof = RadialProfile::flat(3);
  TangentPair colinear;
  colinear.v = {Complex(1.0), Complex(2.0), Complex(0.5)};
  colinear.w = {Complex(2.0), Complex(4.0), Complex(1.0)};
  CHECK_THROWS_AS(sectional_curvature(prof, 0.0, colinear), DegeneratePlaneError);

  // reduced two-term numerator for normal-form pairs:
  // e^{-2t} { [phi''^2/phi' - phi'''] |v1 wbar1 - w1 vbar1|^2
  //           + 2 [phi'^2/phi - phi''] |v1 w2|^2 }
  // (the factor 2 comes from expanding 2 R(v,vbar,w,wbar) - 2 Re R(v,wbar,v,wbar);
  // both bracket coefficients stay positive, so the positivity statement is
  // insensitive to it)
  std::mt19937_64 rng2(37);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3;
    const RadialProfile p3 = RadialProfile::flat(n);
    const double t = 0.5 * g(rng2);
    TangentPair pair;
    pair.v = {Complex(g(rng2), g(rng2)), Complex(0.0), Complex(0.0)};
    pair.w = {Complex(g(rng2), g(rng2)), Complex(g(rng2), g(rng2)), Complex(0.0)};
    const ProfilePoint pp = p3.at(t);
    const Complex cross = pair.v[0] * std::conj(pair.w[0]) - pair.w[0] * std::conj(pair.v[0]);
    const double term1 = (pp.phi2 * pp.phi2 / pp.phi1 - pp.phi3) * std::norm(cross);
    const double term2 =
        (pp.phi1 * pp.phi1 / pp.phi - pp.phi2) * std::norm(pair.v[0] * pair.w[1]);
    const double reduced = std::exp(-2.0 * t) * (term1 + 2.0 * term2);
    const double full = sectional_numerator(p3, t, pair);
    CHECK(std::abs(full - reduced) <= 1e-10 * std::max(std::abs(reduced), 1e-6));
  }

  // invariance under the isotropy action (phase on slot 1, unitary mix of the
  // rest) and real remixing of the plane basis
  const RadialProfile p3 = RadialProfile::flat(3);
  TangentPair base;
  base.v = {Complex(0.7, 0.2), Complex(0.0), Complex(0.0)};
  base.w = {Complex(0.1, -0.4), Complex(0.8, 0.3), Complex(0.0)};
  const double sec0 = sectional_curvature(p3, 0.7, base);
  // rotate slots 2..3 by a unitary and remix (v, w) over the reals
  const double c = std::cos(0.6), s = std::sin(0.6);
  auto rot = [&](const std::vector<Complex>& x) {
    std::vector<Complex> y = x;
    const Complex ph = std::polar(1.0, 0.9);
    y[0] = x[0];
    y[1] = ph * (c * x[1] + s * x[2]);
    y[2] = ph * (-s * x[1] + c * x[2]);
    return y;
  };
  TangentPair mixed;
  mixed.v = rot(base.v);
  mixed.w = rot(base.w);
  for (std::size_t i = 0; i < 3; ++i) {
    const Complex nv = 2.0 * mixed.v[i] + 0.5 * mixed.w[i];
    const Complex nw = -1.0 * mixed.v[i] + 1.5 * mixed.w[i];
    mixed.v[i] = nv;
    mixed.w[i] = nw;
  }
  CHECK(std::abs(sectional_curvature(p3, 0.7, mixed) - sec0) < 1e-10 * std::abs(sec0));
}

TEST_CASE("sectional positivity bridge: both bracket coefficients positive") {
  // positivity of all planes reduces to [(phi'')^2/phi' - phi'''] > 0 and
  // [(phi')^2/phi - phi''] > 0; both margins stay clear over the full grid
  for (int n = 1; n <= 6; ++n) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (int i = 0; i <= 240; ++i) {
      const double t = -30.0 + 60.0 * i / 240.0;
      const ProfilePoint p = prof.at(t);
      CHECK(p.phi2 * p.phi2 / p.phi1 - p.phi3 > 0.0);
      CHECK(p.phi1 * p.phi1 / p.phi - p.phi2 > 0.0);
    }
  }
}

TEST_CASE("ricci tensor: rank-one form, FD Hessian, compact dichotomy") {
  const RadialProfile flat = RadialProfile::flat(2);
  for (double t : {-1.0, 0.0, 1.5}) {
    const ProfilePoint p = flat.at(t);
    const HermitianMatrix ric = ricci_tensor(flat, t);
    CHECK(std::abs(ric.entry(0, 0) - Complex(std::exp(-t) * p.phi2)) < 1e-9);
    CHECK(std::abs(ric.entry(1, 1) - Complex(std::exp(-t) * p.phi1)) < 1e-9);
  }

  // compact k=1 positive definite at samples; (3,2) indefinite somewhere
  const RadialProfile c21 = RadialProfile::compact(2, 1);
  bool pd = true;
  for (double t : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(ricci_tensor(c21, t)));
    pd = pd && es.eigenvalues().minCoeff() > 0.0;
  }
  CHECK(pd);
  const RadialProfile c32 = RadialProfile::compact(3, 2);
  bool indefinite = false;
  for (int i = 0; i <= 60; ++i) {
    const double t = -6.0 + 12.0 * i / 60.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(ricci_tensor(c32, t)));
    if (es.eigenvalues().minCoeff() <= 0.0) indefinite = true;
  }
  CHECK(indefinite);
}

TEST_CASE("scalar curvature: trace oracle, cigar value, decay product") {
  std::mt19937_64 rng(41);
  for (int n : {1, 2, 3}) {
    const RadialProfile prof = RadialProfile::flat(n);
    for (double t : {-2.0, 0.0, 1.0}) {
      std::vector<Complex> z(static_cast<std::size_t>(n), Complex(0.0));
      z[0] = std::exp(0.5 * t);
      const HermitianMatrix gi = metric_inverse(prof, z);
      const HermitianMatrix ric = ricci_tensor(prof, t);
      // trace with the same contraction convention as the inverse identity
      Complex tr(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += gi.entry(i, j) * ric.entry(i, j);
      CHECK(std::abs(scalar_curvature(prof, t) - tr.real()) < 1e-9 * std::abs(tr.real()));
    }
  }

  // cigar at t = 0: f''/phi' with f'' = phi'' = 1/4, phi' = 1/2
  CHECK(std::abs(scalar_curvature(RadialProfile::flat(1), 0.0) - 0.5) < 1e-10);

  // positivity on the sweep and the 1/rho decay product
  const RadialProfile p3 = RadialProfile::flat(3);
  for (int i = 0; i <= 60; ++i) {
    const double t = -30.0 + i;
    CHECK(scalar_curvature(p3, t) > 0.0);
  }
  const double r1 = scalar_curvature(p3, 100.0) * distance(p3, 100.0);
  const double r15 = scalar_curvature(p3, 150.0) * distance(p3, 150.0);
  const double r2 = scalar_curvature(p3, 200.0) * distance(p3, 200.0);
  CHECK(std::abs(r15 - r1) / r1 < 0.05);
  CHECK(std::abs(r2 - r15) / r15 < 0.05);
}

TEST_CASE("volume growth: ratio stabilizes, tail limit, monotone") {
  for (int n : {2, 3}) {
    const RadialProfile prof = RadialProfile::flat(n);
    const double v1 = volume_growth(prof, 100.0);
    const double v2 = volume_growth(prof, 200.0);
    CHECK(std::abs(v2 - v1) / v1 < 0.05);
  }
  const RadialProfile p2 = RadialProfile::flat(2);
  // V ~ e^{nt}/n as t -> -infinity
  const double v = ball_volume(p2, -30.0);
  CHECK(std::abs(v * 2.0 / std::exp(2.0 * -30.0) - 1.0) < 1e-10);
  double prev = ball_volume(p2, -5.0);
  for (double t = -4.0; t <= 5.0; t += 1.0) {
    const double bv = ball_volume(p2, t);
    CHECK(bv > prev);
    prev = bv;
  }
}

TEST_CASE("hermitian structure of produced matrices") {
  std::mt19937_64 rng(43);
  const RadialProfile prof = RadialProfile::flat(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto z = random_point(3, rng, -2.0, 2.0);
    CHECK(metric_at(prof, z).hermiticity_defect() < 1e-14);
    CHECK(metric_inverse(prof, z).hermiticity_defect() < 1e-14);
  }
}
