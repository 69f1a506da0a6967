#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsoliton {

using Rational = mpq_class;

namespace detail {

inline Rational rat_pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (e < 0) return Rational(1) / rat_pow(base, -e);
  Rational acc(1), b = base;
  long k = e;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

inline Rational rat_factorial(long n) {
  Rational f(1);
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Rational rat_binomial(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  Rational acc(1);
  for (long i = 0; i < k; ++i) {
    acc *= Rational(n - i);
    acc /= Rational(i + 1);
  }
  return acc;
}

}  // namespace detail

// Polynomial with exact rational coefficients, c[j] multiplying x^j.
struct RatPoly {
  std::vector<Rational> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (int j = degree(); j >= 0; --j) acc = acc * x + c[static_cast<std::size_t>(j)];
    return acc;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (int j = degree(); j >= 0; --j) acc = acc * x + c[static_cast<std::size_t>(j)].get_d();
    return acc;
  }

  RatPoly derivative() const {
    RatPoly d;
    if (c.size() <= 1) {
      d.c.assign(1, Rational(0));
      return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d.c[j - 1] = Rational(static_cast<long>(j)) * c[j];
    return d;
  }

  bool operator==(const RatPoly& o) const {
    std::size_t m = std::max(c.size(), o.c.size());
    for (std::size_t j = 0; j < m; ++j) {
      Rational a = j < c.size() ? c[j] : Rational(0);
      Rational b = j < o.c.size() ? o.c[j] : Rational(0);
      if (a != b) return false;
    }
    return true;
  }
};

// h(x) = e^{rate x} p(x) - q(x) with exact rational data. Derivatives stay in
// the same family: p -> rate*p + p', q -> q'.
struct PolyExpPair {
  RatPoly p;
  RatPoly q;
  Rational rate;

  Rational p_at(const Rational& x) const { return p.eval(x); }
  Rational q_at(const Rational& x) const { return q.eval(x); }

  double eval(double x) const {
    return std::exp(rate.get_d() * x) * p.eval(x) - q.eval(x);
  }
};

// The pole-matching function of the compact case:
//   p_j = (-1)^{n-j} (n!/j!) (n+k)^{j-1} (n+k-j),
//   q_j = (-1)^{n-j} (n!/j!) (n-k)^{j-1} (n-k-j),  j = 0..n,  rate = 2k.
// The j = 0 coefficients carry the exact 1/(n±k) factor.
inline PolyExpPair build_h(int n, int k) {
  if (n < 2 || k < 1 || k > n - 1)
    throw std::invalid_argument("build_h: need n >= 2 and 1 <= k <= n-1");
  PolyExpPair h;
  h.rate = Rational(2 * k);
  h.p.c.resize(static_cast<std::size_t>(n) + 1);
  h.q.c.resize(static_cast<std::size_t>(n) + 1);
  const Rational nf = detail::rat_factorial(n);
  for (int j = 0; j <= n; ++j) {
    const Rational sign((n - j) % 2 == 0 ? 1 : -1);
    const Rational common = sign * nf / detail::rat_factorial(j);
    h.p.c[static_cast<std::size_t>(j)] =
        common * detail::rat_pow(Rational(n + k), j - 1) * Rational(n + k - j);
    h.q.c[static_cast<std::size_t>(j)] =
        common * detail::rat_pow(Rational(n - k), j - 1) * Rational(n - k - j);
  }
  return h;
}

// Exact i-th derivative via the recurrence p_{i+1} = rate*p_i + p_i'.
inline PolyExpPair h_derivative(const PolyExpPair& pair, int order = 1) {
  if (order < 0) throw std::invalid_argument("h_derivative: order >= 0");
  PolyExpPair d = pair;
  for (int i = 0; i < order; ++i) {
    RatPoly dp = d.p.derivative();
    if (dp.c.size() < d.p.c.size()) dp.c.resize(d.p.c.size(), Rational(0));
    for (std::size_t j = 0; j < d.p.c.size(); ++j) dp.c[j] += d.rate * d.p.c[j];
    d.p = dp;
    d.q = d.q.derivative();
  }
  return d;
}

// h^(i)(0) as an exact rational (zero for 0 <= i <= n).
inline Rational h_derivative_at_zero(const PolyExpPair& pair, int i) {
  PolyExpPair d = h_derivative(pair, i);
  return d.p.c[0] - d.q.c[0];
}

// Coefficients C_i of h^{(n+1)}(x) = e^{2kx} sum_i C_i x^i, by the closed
// alternating-sum formula (independent of the derivative recurrence):
//   C_i = (n!/i!) (n+k)^i sum_{j=0}^{n-i} (-1)^{n-i-j} B_j(i),
//   B_j(i) = C(n+1,j) (2k)^{n+1-j} (n+k)^{j-1} (n+k-i-j).
inline std::vector<Rational> h_n1_B_row(int n, int k, int i) {
  std::vector<Rational> B;
  for (int j = 0; j <= n - i; ++j)
    B.push_back(detail::rat_binomial(n + 1, j) * detail::rat_pow(Rational(2 * k), n + 1 - j) *
                detail::rat_pow(Rational(n + k), j - 1) * Rational(n + k - i - j));
  return B;
}

inline std::vector<Rational> h_n1_coefficients(int n, int k) {
  std::vector<Rational> C(static_cast<std::size_t>(n) + 1);
  const Rational nf = detail::rat_factorial(n);
  for (int i = 0; i <= n; ++i) {
    auto B = h_n1_B_row(n, k, i);
    Rational s(0);
    for (int j = 0; j <= n - i; ++j) {
      const Rational sign((n - i - j) % 2 == 0 ? 1 : -1);
      s += sign * B[static_cast<std::size_t>(j)];
    }
    C[static_cast<std::size_t>(i)] =
        nf / detail::rat_factorial(i) * detail::rat_pow(Rational(n + k), i) * s;
  }
  return C;
}

// Taylor coefficients b_i (i = n+1 .. n+count) of g(y)/n! where
// g(y) = e^{2ky} sum_j (n!/j!)(n-k)^{j-1}(n-k-j) y^j
//        - sum_j (n!/j!)(n+k)^{j-1}(n+k-j) y^j:
//   b_i = sum_{j=0}^{n} (2k)^{i-j} (n-k)^{j-1} (n-k-j) / ((i-j)! j!).
inline std::vector<Rational> g_series_coefficients(int n, int k, int count = 40) {
  std::vector<Rational> b;
  for (int i = n + 1; i <= n + count; ++i) {
    Rational s(0);
    for (int j = 0; j <= n; ++j) {
      s += detail::rat_pow(Rational(2 * k), i - j) * detail::rat_pow(Rational(n - k), j - 1) *
           Rational(n - k - j) /
           (detail::rat_factorial(i - j) * detail::rat_factorial(j));
    }
    b.push_back(s);
  }
  return b;
}

}  // namespace krsoliton
