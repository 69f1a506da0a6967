#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "krsoliton/types.hpp"

namespace krsoliton {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1] (positive half).
inline constexpr double kGK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
// Gauss-7 weights for the even-index nodes above.
inline constexpr double kG7Weights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fc = f(mid);
  double k15 = kK15Weights[0] * fc;
  double g7 = kG7Weights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15Nodes[i];
    const double fsum = f(mid + dx) + f(mid - dx);
    k15 += kK15Weights[i] * fsum;
    if (i % 2 == 0) g7 += kG7Weights[i / 2] * fsum;
  }
  k15 *= half;
  g7 *= half;
  double err = std::abs(k15 - g7);
  err = 200.0 * err * std::sqrt(std::max(err, 0.0));
  return {k15, err};
}

}  // namespace detail

// Fixed composite K15 rule. No adaptivity: the node positions depend smoothly
// on the endpoints, so results can be finite-differenced with respect to the
// integration limits without amplifying node-placement noise.
template <class F>
double integrate_fixed(F&& f, double a, double b, int panels = 24) {
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + (b - a) * static_cast<double>(i) / panels;
    const double x1 = a + (b - a) * static_cast<double>(i + 1) / panels;
    acc += detail::gk15(f, x0, x1).first;
  }
  return acc;
}

// Adaptive bisection around the GK15 rule. Throws NonConvergenceError when
// the interval budget is exhausted before the tolerance is met.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                              double abs_tol = 1e-300, int max_intervals = 20000) {
  QuadResult out;
  if (a == b) return out;

  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> stack;
  auto [v0, e0] = detail::gk15(f, a, b);
  out.evaluations += 15;
  stack.push_back({a, b, v0, e0});

  double total = v0;
  int splits = 0;
  while (!stack.empty()) {
    // refine the worst segment first
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    double err_sum = 0.0;
    for (const auto& s : stack) err_sum += s.error;
    if (err_sum <= std::max(abs_tol, rel_tol * std::abs(total))) {
      out.value = total;
      out.error = err_sum;
      return out;
    }
    if (++splits > max_intervals)
      throw NonConvergenceError("integrate_adaptive: interval budget exhausted");

    Seg s = stack[worst];
    stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
    const double mid = 0.5 * (s.a + s.b);
    auto [vl, el] = detail::gk15(f, s.a, mid);
    auto [vr, er] = detail::gk15(f, mid, s.b);
    out.evaluations += 30;
    total += (vl + vr) - s.value;
    stack.push_back({s.a, mid, vl, el});
    stack.push_back({mid, s.b, vr, er});
  }
  out.value = total;
  return out;
}

}  // namespace krsoliton
