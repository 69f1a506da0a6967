#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "krsoliton/types.hpp"

namespace krsoliton {
namespace detail {

// Truncated power series in x = e^t, used for the t -> -infinity expansion of
// the flat-space profile. Order is fixed at compile time; coefficient 0 is
// the constant term.
template <int K>
struct PowerSeries {
  std::array<double, K> c{};

  static PowerSeries unit() {
    PowerSeries s;
    s.c[0] = 1.0;
    return s;
  }

  PowerSeries operator*(const PowerSeries& o) const {
    PowerSeries r;
    for (int i = 0; i < K; ++i) {
      if (c[i] == 0.0) continue;
      for (int j = 0; j + i < K; ++j) r.c[i + j] += c[i] * o.c[j];
    }
    return r;
  }

  PowerSeries& operator+=(const PowerSeries& o) {
    for (int i = 0; i < K; ++i) c[i] += o.c[i];
    return *this;
  }

  PowerSeries scaled(double s) const {
    PowerSeries r = *this;
    for (auto& v : r.c) v *= s;
    return r;
  }

  // multiply by x^m (shift coefficients up)
  PowerSeries shifted(int m) const {
    PowerSeries r;
    for (int i = 0; i + m < K; ++i) r.c[i + m] = c[i];
    return r;
  }

  // reciprocal, requires nonzero constant term
  PowerSeries reciprocal() const {
    PowerSeries r;
    r.c[0] = 1.0 / c[0];
    for (int m = 1; m < K; ++m) {
      double acc = 0.0;
      for (int i = 1; i <= m; ++i) acc += c[i] * r.c[m - i];
      r.c[m] = -acc / c[0];
    }
    return r;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (int i = K - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
  }
};

inline constexpr int kTailOrder = 8;
using TailSeries = PowerSeries<kTailOrder>;

// Coefficients a_1..a_K of phi(t) = sum_m a_m e^{mt} for the flat-space case,
// obtained by inverting the implicit relation order by order. With
// phi = x*psi(x), x = e^t, the relation reads psi(x)^n * T(x*psi(x)) = 1
// where T(y) = sum_m n y^m / (m! (n+m)). a_1 = 1 by the chosen normalization.
inline TailSeries flat_tail_coefficients(int n) {
  if (n < 1) throw std::invalid_argument("flat_tail_coefficients: n >= 1");
  constexpr int K = kTailOrder;
  std::array<double, K> tc{};
  double mfact = 1.0;
  for (int m = 0; m < K; ++m) {
    if (m > 0) mfact *= m;
    tc[m] = static_cast<double>(n) / (mfact * static_cast<double>(n + m));
  }

  TailSeries psi = TailSeries::unit();
  auto residual = [&](const TailSeries& p) {
    TailSeries pn = TailSeries::unit();
    for (int i = 0; i < n; ++i) pn = pn * p;
    TailSeries arg = p.shifted(1);  // x * psi
    TailSeries t_of_arg;
    t_of_arg.c[0] = tc[K - 1];
    for (int m = K - 2; m >= 0; --m) {
      t_of_arg = t_of_arg * arg;
      t_of_arg.c[0] += tc[m];
    }
    TailSeries r = pn * t_of_arg;
    r.c[0] -= 1.0;
    return r;
  };
  for (int m = 1; m < K; ++m) {
    TailSeries r = residual(psi);
    psi.c[m] -= r.c[m] / static_cast<double>(n);
  }

  // a_m = psi_{m-1}; return as coefficients of phi itself (a_1 at index 1)
  TailSeries a;
  for (int m = 1; m < K; ++m) a.c[m] = psi.c[m - 1];
  return a;
}

// Derivative series: phi^(d) = sum_m m^d a_m e^{mt}.
inline TailSeries tail_derivative(const TailSeries& a, int d) {
  TailSeries r = a;
  for (int m = 1; m < kTailOrder; ++m) {
    double f = 1.0;
    for (int i = 0; i < d; ++i) f *= m;
    r.c[m] *= f;
  }
  return r;
}

}  // namespace detail

// Leading expansion coefficients of the flat-space profile near t -> -infinity:
// phi(t) = a1 e^t + a2 e^{2t} + ...  Returns (a1, a2) = (1, -1/(n+1)).
struct SeriesCoefficients {
  double a1 = 1.0;
  double a2 = 0.0;
};

inline SeriesCoefficients series_coefficients(int n) {
  if (n < 1) throw std::invalid_argument("series_coefficients: n >= 1");
  return {1.0, -1.0 / static_cast<double>(n + 1)};
}

}  // namespace krsoliton
