#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace krsoliton {

// The three rotationally symmetric geometries the library constructs.
//
//   FlatSpace(n)        steady soliton on C^n
//   CanonicalBundle(n,a) steady soliton on the canonical bundle of P^{n-1};
//                        a > 0 is the fiber parameter (area of the projective
//                        line in the zero section, up to 2*pi)
//   CompactBundle(n,k)  shrinking soliton on the P^1-bundle P(L^k + L^-k)
//                        over P^{n-1}; the profile runs over (n-k, n+k)
struct FlatSpace {
  int n = 1;
};

struct CanonicalBundle {
  int n = 2;
  double a = 1.0;
};

struct CompactBundle {
  int n = 2;
  int k = 1;
};

using SolitonKind = std::variant<FlatSpace, CanonicalBundle, CompactBundle>;

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProfileDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegeneratePlaneError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void validate(const SolitonKind& kind) {
  if (const auto* f = std::get_if<FlatSpace>(&kind)) {
    if (f->n < 1) throw std::invalid_argument("FlatSpace requires n >= 1");
  } else if (const auto* b = std::get_if<CanonicalBundle>(&kind)) {
    if (b->n < 2) throw std::invalid_argument("CanonicalBundle requires n >= 2");
    if (!(b->a > 0.0) || !std::isfinite(b->a))
      throw std::invalid_argument("CanonicalBundle requires a > 0");
  } else {
    const auto& c = std::get<CompactBundle>(kind);
    if (c.n < 2) throw std::invalid_argument("CompactBundle requires n >= 2");
    if (c.k < 1 || c.k > c.n - 1)
      throw std::invalid_argument("CompactBundle requires 1 <= k <= n-1");
  }
}

inline int complex_dim(const SolitonKind& kind) {
  return std::visit([](const auto& g) { return g.n; }, kind);
}

inline std::string kind_name(const SolitonKind& kind) {
  if (std::holds_alternative<FlatSpace>(kind)) return "flat";
  if (std::holds_alternative<CanonicalBundle>(kind)) return "bundle";
  return "compact";
}

// Uniform sampling description used by sweeps, reports and the CLI.
struct GridSpec {
  double lo = -20.0;
  double hi = 20.0;
  int samples = 401;
  double newton_tol = 1e-12;
  int max_iter = 100;

  void validate() const {
    if (!(lo < hi)) throw std::invalid_argument("GridSpec: lo < hi required");
    if (samples < 2) throw std::invalid_argument("GridSpec: samples >= 2 required");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("GridSpec: newton_tol > 0 required");
    if (max_iter < 1) throw std::invalid_argument("GridSpec: max_iter >= 1 required");
  }

  double point(int i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
};

// One sample of a realized profile: phi = u'(t) and its first three
// t-derivatives.
struct ProfilePoint {
  double t = 0.0;
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};

}  // namespace krsoliton
