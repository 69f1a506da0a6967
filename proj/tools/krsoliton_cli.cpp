// Command-line front end: tabulate soliton profiles and geometry, print root
// certificates for the compact case, and run the verification suites.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 numerical non-convergence.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "krsoliton/compact.hpp"
#include "krsoliton/curvature.hpp"
#include "krsoliton/geometry.hpp"
#include "krsoliton/profile.hpp"
#include "krsoliton/quadrature.hpp"
#include "krsoliton/verification.hpp"

namespace {

using namespace krsoliton;

constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitNonConvergence = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Options {
  std::string space = "flat";
  int n = 0;
  int k = 0;
  double a = 1.0;
  bool has_t = false;
  double t = 0.0;
  double t_min = -20.0;
  double t_max = 20.0;
  int samples = 401;
  double tol = 1e-12;
  std::string out;
  std::string format = "csv";
  bool expect_ricci_indefinite = false;
};

SolitonKind make_kind(const Options& o) {
  if (o.space == "flat") return FlatSpace{o.n};
  if (o.space == "bundle") return CanonicalBundle{o.n, o.a};
  if (o.space == "compact") return CompactBundle{o.n, o.k};
  throw std::invalid_argument("unknown --space (expected flat|bundle|compact)");
}

void validate_options(const Options& o) {
  if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  if (o.format != "csv" && o.format != "record")
    throw std::invalid_argument("--format must be csv or record");
}

RadialProfile make_profile(const Options& o) {
  validate_options(o);
  const SolitonKind kind = make_kind(o);
  validate(kind);
  if (o.space == "flat") return RadialProfile::flat(o.n, o.tol);
  if (o.space == "bundle") return RadialProfile::bundle(o.n, o.a, o.tol);
  return RadialProfile::compact(o.n, o.k, std::min(o.tol, 1e-13));
}

std::ostream& open_sink(const Options& o, std::ofstream& file) {
  if (o.out.empty()) return std::cout;
  file.open(o.out);
  if (!file) throw std::invalid_argument("cannot open output file: " + o.out);
  return file;
}

void emit_row(std::ostream& os, const ProfilePoint& p, double detg, double rho, double R) {
  os << fmt(p.t) << ',' << fmt(p.phi) << ',' << fmt(p.phi1) << ',' << fmt(p.phi2) << ','
     << fmt(p.phi3) << ',' << fmt(detg) << ',' << fmt(rho) << ',' << fmt(R) << '\n';
}

void emit_record(std::ostream& os, const ProfilePoint& p, double detg, double rho, double R) {
  os << "t = " << fmt(p.t) << '\n'
     << "phi = " << fmt(p.phi) << '\n'
     << "phi1 = " << fmt(p.phi1) << '\n'
     << "phi2 = " << fmt(p.phi2) << '\n'
     << "phi3 = " << fmt(p.phi3) << '\n'
     << "detg = " << fmt(detg) << '\n'
     << "rho = " << fmt(rho) << '\n'
     << "R = " << fmt(R) << '\n';
}

int cmd_solve(const Options& o) {
  if (o.format == "record" && !o.has_t)
    throw std::invalid_argument("solve: record format is only available for a single --t point");
  const RadialProfile profile = make_profile(o);
  const int n = profile.dim();
  std::ofstream file;
  std::ostream& os = open_sink(o, file);

  auto detg = [&](const ProfilePoint& p) {
    return std::exp(-n * p.t) * std::pow(p.phi, n - 1) * p.phi1;
  };

  if (o.space == "compact") {
    const CompactSoliton* cg = profile.compact_geometry();
    const auto& cert = cg->certificate();
    os << "# space = compact, n = " << o.n << ", k = " << o.k << '\n';
    os << "# c1 = " << fmt(cert.c1) << ", c2 = " << fmt(cert.c2) << '\n';
    os << "t,phi,phi1,phi2,phi3,detg,rho,R\n";
    const double lo = cg->phi_min() + 1e-4, hi = cg->phi_max() - 1e-4;
    const int rows = o.has_t ? 1 : o.samples;
    double rho = 0.0, prev_phi = static_cast<double>(o.n);
    auto arc = [&](double p0, double p1) {
      return integrate_fixed(
          [&](double s) { return 1.0 / std::sqrt(cg->phi_prime(s)); }, p0, p1, 8);
    };
    for (int i = 0; i < rows; ++i) {
      const double phi =
          o.has_t ? cg->phi_of_t(o.t) : lo + (hi - lo) * i / std::max(1, o.samples - 1);
      ProfilePoint p;
      p.t = cg->t_of_phi(phi);
      p.phi = phi;
      p.phi1 = cg->phi_prime(phi);
      p.phi2 = cg->phi_second(phi);
      p.phi3 = cg->phi_third(phi);
      rho += arc(prev_phi, phi);
      prev_phi = phi;
      emit_row(os, p, detg(p), rho, scalar_curvature(profile, p.t));
    }
    return 0;
  }

  os << "t,phi,phi1,phi2,phi3,detg,rho,R\n";
  if (o.has_t) {
    const ProfilePoint p = profile.at(o.t);
    emit_row(os, p, detg(p), distance(profile, o.t), scalar_curvature(profile, o.t));
    return 0;
  }
  GridSpec grid{o.t_min, o.t_max, o.samples, o.tol, 200};
  grid.validate();
  double rho = distance(profile, grid.point(0));
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.point(i);
    if (i > 0) {
      rho += integrate_adaptive([&](double tau) { return std::sqrt(profile.at(tau).phi1); },
                                grid.point(i - 1), t, 1e-10, 1e-14)
                 .value;
    }
    const ProfilePoint p = profile.at(t);
    emit_row(os, p, detg(p), rho, scalar_curvature(profile, t));
  }
  return 0;
}

int cmd_root(const Options& o) {
  if (o.space != "compact")
    throw std::invalid_argument("root: requires --space compact (or just --n/--k)");
  validate(SolitonKind{CompactBundle{o.n, o.k}});
  const RootCertificate cert = certify(o.n, o.k, std::min(o.tol, 1e-13));
  std::ofstream file;
  std::ostream& os = open_sink(o, file);
  os << "n = " << cert.n << '\n'
     << "k = " << cert.k << '\n'
     << "c1 = " << fmt(cert.c1) << '\n'
     << "c2 = " << fmt(cert.c2) << '\n'
     << "bracket_lo = " << fmt(cert.bracket_lo) << '\n'
     << "bracket_hi = " << fmt(cert.bracket_hi) << '\n'
     << "residual_48 = " << fmt(cert.residual_48) << '\n'
     << "residual_49 = " << fmt(cert.residual_49) << '\n'
     << "den_left = " << fmt(cert.den_left) << '\n'
     << "den_right = " << fmt(cert.den_right) << '\n'
     << "residue_left = " << fmt(cert.residue_left) << '\n'
     << "residue_right = " << fmt(cert.residue_right) << '\n'
     << "valid = " << (cert.valid() ? "true" : "false") << '\n';
  return cert.valid() ? 0 : kExitVerification;
}

int cmd_curvature(const Options& o) {
  const RadialProfile profile = make_profile(o);
  std::ofstream file;
  std::ostream& os = open_sink(o, file);
  os << "t,A,B,C,D,E,prefactor\n";
  GridSpec grid{o.t_min, o.t_max, o.samples, o.tol, 200};
  grid.validate();
  const int rows = o.has_t ? 1 : grid.samples;
  for (int i = 0; i < rows; ++i) {
    const double t = o.has_t ? o.t : grid.point(i);
    const CurvatureFrame fr = curvature_frame(profile, t);
    os << fmt(fr.t) << ',' << fmt(fr.coeff_A) << ',' << fmt(fr.coeff_B) << ','
       << fmt(fr.coeff_C) << ',' << fmt(fr.coeff_D) << ',' << fmt(fr.coeff_E) << ','
       << fmt(fr.prefactor) << '\n';
  }
  return 0;
}

void print_report(std::ostream& os, const CheckReport& rep) {
  os << rep.name << ".passed = " << (rep.passed ? "true" : "false") << '\n';
  os << rep.name << ".margin = " << fmt(rep.margin) << '\n';
  for (const auto& s : rep.details) {
    os << rep.name << '.' << s.name << " = " << (s.passed ? "pass" : "fail")
       << " (margin " << fmt(s.margin) << " at " << fmt(s.worst_point) << ")"
       << (s.informational ? " [finding]" : "") << '\n';
  }
}

std::vector<CheckReport> run_suites(const Options& o, const RadialProfile& profile) {
  std::vector<CheckReport> reports;
  if (o.space == "compact") {
    reports.push_back(check_lemma_4_1(o.n, o.k));
    const CompactSoliton* cg = profile.compact_geometry();
    const auto& cert = cg->certificate();

    CheckReport cc = detail::make_report("certificate_closure");
    cc.absorb({"c1_in_open_interval", cert.c1 > -1.0 && cert.c1 < 0.0, cert.c1, cert.c1, 0.0,
               false});
    cc.absorb({"den_left_zero", std::abs(cert.den_left) <= 1e-9, cert.den_left,
               cg->phi_min(), 1e-9, false});
    cc.absorb({"den_right_zero", std::abs(cert.den_right) <= 1e-9, cert.den_right,
               cg->phi_max(), 1e-9, false});
    cc.absorb({"residue_left", std::abs(cert.residue_left - 1.0 / o.k) <= 1e-6,
               cert.residue_left - 1.0 / o.k, cg->phi_min(), 1e-6, false});
    cc.absorb({"residue_right", std::abs(cert.residue_right + 1.0 / o.k) <= 1e-6,
               cert.residue_right + 1.0 / o.k, cg->phi_max(), 1e-6, false});
    reports.push_back(cc);

    CheckReport prof = detail::make_report("compact_profile");
    double min_d1 = 0.0, arg = 0.0;
    bool first = true, monotone = true;
    double prev_t = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double phi = cg->phi_min() + 1e-4 + (cg->phi_max() - cg->phi_min() - 2e-4) * i / 199.0;
      const double d1 = cg->phi_prime(phi);
      const double tt = cg->t_of_phi(phi);
      if (!first && tt <= prev_t) monotone = false;
      if (first || d1 < min_d1) {
        min_d1 = d1;
        arg = phi;
      }
      prev_t = tt;
      first = false;
    }
    prof.absorb({"phi_prime_positive_interior", min_d1 > 0.0, min_d1, arg, 0.0, false});
    prof.absorb({"t_of_phi_monotone", monotone, monotone ? 1.0 : -1.0, 0.0, 0.0, false});
    prof.absorb({"endpoints_vanish",
                 cg->phi_prime(cg->phi_min()) == 0.0 && cg->phi_prime(cg->phi_max()) == 0.0,
                 0.0, 0.0, 0.0, false});
    reports.push_back(prof);

    const RicciPositivityReport ric = cg->ricci_positivity_report(2000);
    CheckReport rr = detail::make_report("ricci_positivity");
    rr.absorb({"first_quantity_positive", ric.first_positive, ric.min_first, ric.argmin_first,
               0.0, false});
    if (o.expect_ricci_indefinite)
      rr.absorb({"second_quantity_indefinite_as_expected", !ric.second_positive,
                 ric.min_second, ric.argmin_second, 0.0, false});
    else
      rr.absorb({"second_quantity_positive", ric.second_positive, ric.min_second,
                 ric.argmin_second, 0.0, false});
    reports.push_back(rr);

    reports.push_back(check_soliton_identity(profile, GridSpec{-1.5, 1.5, 7, o.tol, 200}));
    return reports;
  }

  reports.push_back(check_soliton_identity(profile, GridSpec{-2.0, 2.0, 9, o.tol, 200}));
  GridSpec sweep{-30.0, 30.0, 601, o.tol, 200};
  // the profile inequalities hold globally only in the flat case; the bundle
  // satisfies them away from the zero section
  if (o.space == "flat") reports.push_back(check_lemma_2_2(profile, sweep));

  CheckReport pos = detail::make_report("profile_positivity");
  double mphi = 0.0, mphi1 = 0.0, a1 = 0.0, a2 = 0.0;
  bool first = true;
  for (int i = 0; i < sweep.samples; ++i) {
    const double t = sweep.point(i);
    const ProfilePoint p = profile.at(t);
    if (first || p.phi < mphi) {
      mphi = p.phi;
      a1 = t;
    }
    if (first || p.phi1 < mphi1) {
      mphi1 = p.phi1;
      a2 = t;
    }
    first = false;
  }
  pos.absorb({"phi_positive", mphi > 0.0, mphi, a1, 0.0, false});
  pos.absorb({"phi_prime_positive", mphi1 > 0.0, mphi1, a2, 0.0, false});
  if (o.space == "bundle") {
    const double a = std::get<CanonicalBundle>(profile.kind()).a;
    const double gap = profile.at(-40.0).phi - a;
    pos.absorb({"boundary_value_at_minus_40", std::abs(gap) < 1e-8, gap, -40.0, 1e-8, false});
  }
  reports.push_back(pos);

  if (o.space == "flat")
    reports.push_back(check_c_function(o.n, GridSpec{1e-3, 3.0 * o.n, 300, o.tol, 200}));
  reports.push_back(check_asymptotics(profile));
  return reports;
}

int cmd_verify(const Options& o) {
  const RadialProfile profile = make_profile(o);
  std::ofstream file;
  std::ostream& os = open_sink(o, file);
  const auto reports = run_suites(o, profile);
  bool all = true;
  for (const auto& r : reports) {
    print_report(os, r);
    all = all && r.passed;
  }
  os << "verify = " << (all ? "pass" : "fail") << '\n';
  return all ? 0 : kExitVerification;
}

int cmd_report(const Options& o) {
  const RadialProfile profile = make_profile(o);
  std::ofstream file;
  std::ostream& os = open_sink(o, file);
  os << "space = " << o.space << '\n' << "n = " << o.n << '\n';
  if (o.space == "bundle") os << "a = " << fmt(o.a) << '\n';
  if (o.space == "compact") {
    os << "k = " << o.k << '\n';
    const auto& cert = profile.compact_geometry()->certificate();
    os << "c1 = " << fmt(cert.c1) << '\n' << "c2 = " << fmt(cert.c2) << '\n';
  } else {
    os << "integration_constant = " << fmt(profile.integration_constant()) << '\n';
    for (double t : {100.0, 200.0}) {
      const ProfilePoint p = profile.at(t);
      os << "phi_over_t@" << t << " = " << fmt(p.phi / t) << '\n';
      os << "phi_prime@" << t << " = " << fmt(p.phi1) << '\n';
      os << "volume_ratio@" << t << " = " << fmt(volume_growth(profile, t)) << '\n';
      os << "R_times_rho@" << t << " = "
         << fmt(scalar_curvature(profile, t) * distance(profile, t)) << '\n';
    }
  }
  const auto reports = run_suites(o, profile);
  for (const auto& r : reports)
    os << "check." << r.name << " = " << (r.passed ? "pass" : "fail") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotationally symmetric gradient Kahler-Ricci solitons: profiles, "
               "curvature, root certificates and verification"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* cmd, bool needs_space) {
    if (needs_space)
      cmd->add_option("--space", o.space, "flat|bundle|compact")->required();
    cmd->add_option("--n", o.n, "complex dimension")->required();
    cmd->add_option("--k", o.k, "compact twisting parameter (1 <= k <= n-1)");
    cmd->add_option("--a", o.a, "bundle fiber parameter (a > 0)");
    cmd->add_option("--tol", o.tol, "solver tolerance");
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--format", o.format, "csv|record");
  };
  auto add_grid = [&](CLI::App* cmd) {
    auto* t = cmd->add_option("--t", o.t, "single evaluation point");
    cmd->add_option("--t-min", o.t_min, "grid start");
    cmd->add_option("--t-max", o.t_max, "grid end");
    cmd->add_option("--samples", o.samples, "grid size");
    t->each([&](const std::string&) { o.has_t = true; });
  };

  auto* solve = app.add_subcommand("solve", "tabulate the profile and geometry over a grid");
  add_common(solve, true);
  add_grid(solve);
  auto* root = app.add_subcommand("root", "print the compact-case root certificate");
  root->add_option("--n", o.n)->required();
  root->add_option("--k", o.k)->required();
  root->add_option("--tol", o.tol);
  root->add_option("--out", o.out);
  root->add_option("--format", o.format);
  auto* curv = app.add_subcommand("curvature", "tabulate the curvature coefficients");
  add_common(curv, true);
  add_grid(curv);
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  add_common(verify, true);
  verify->add_flag("--expect-ricci-indefinite", o.expect_ricci_indefinite,
                   "treat an indefinite second Ricci quantity as the expected outcome");
  auto* report = app.add_subcommand("report", "aggregated profile/verification report");
  add_common(report, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (root->parsed()) {
      o.space = "compact";
      return cmd_root(o);
    }
    if (curv->parsed()) return cmd_curvature(o);
    if (verify->parsed()) return cmd_verify(o);
    if (report->parsed()) return cmd_report(o);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ProfileDomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "numerical non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::range_error& e) {
    std::cerr << "numerical range error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return 0;
}
