#pragma once

// The acceptance suite: twelve end-to-end checks of the discretization
// against closed forms, oracles and the predicted coefficients. Each check
// returns a result line; nothing here relaxes a tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amcf/bifurcation.hpp"
#include "amcf/equilibria.hpp"
#include "amcf/evolution.hpp"
#include "amcf/geometry.hpp"
#include "amcf/oracles.hpp"
#include "amcf/reduction.hpp"
#include "amcf/stability.hpp"

namespace amcf {

struct AcceptanceOptions {
  bool quick = false;          // criteria 1-6 only
  bool mutate_f = false;  // inject a sign error into f(r) for the flow runs
  unsigned long seed = 12345;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace acceptance {

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

inline std::string fix(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << v;
  return os.str();
}

// Criteria 1 and 2 share one run.
inline FlowTrajectory conservation_run(const AcceptanceOptions& opt) {
  StepController c;
  c.scheme = Scheme::SemiImplicitMidpoint;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.store_profiles = false;
  c.mutate_f = opt.mutate_f;
  const auto r0 = ProfileFunction::sample(256, [](double x) { return 1.0 + 0.2 * std::cos(2.0 * x); });
  return evolve(r0, c);
}

inline CriterionResult volume_preservation(const AcceptanceOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto traj = conservation_run(opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double F0 = traj.diagnostics.front().volume;
  double drift = 0.0;
  for (const auto& d : traj.diagnostics) drift = std::max(drift, std::abs(d.volume - F0) / F0);
  const bool ok = traj.termination == Termination::ReachedTEnd && drift < 1e-8 && secs < 30.0;
  return {1, "volume preservation", ok,
          "max relative drift " + sci(drift) + " (limit 1e-08), termination " + to_string(traj.termination) +
              ", run " + fix(secs, 1) + " s (limit 30 s)"};
}

inline CriterionResult area_monotonicity(const AcceptanceOptions& opt) {
  const auto traj = conservation_run(opt);
  const double S0 = traj.diagnostics.front().area;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < traj.diagnostics.size(); ++i) {
    worst = std::max(worst, traj.diagnostics[i].area - traj.diagnostics[i - 1].area);
  }
  const bool ok = traj.termination == Termination::ReachedTEnd && worst <= 1e-10 * S0;
  return {2, "area monotonicity", ok,
          "largest step increase " + sci(worst) + " (allowed " + sci(1e-10 * S0) + ") over " +
              std::to_string(traj.diagnostics.size()) + " records"};
}

inline CriterionResult cylinder_spectrum_check(const AcceptanceOptions&) {
  const auto start = std::chrono::steady_clock::now();
  const int m = 40, n = 256;
  double worst = 0.0;
  for (double rs : {0.5, 1.0, 2.0}) {
    const auto rep = numeric_spectrum(ProfileFunction::constant(n, rs), SpectrumBasis::Full, m);
    std::vector<Complex> expected;
    for (int i = 0; i < m; ++i) {
      const int k = real_basis_wavenumber(i);
      expected.emplace_back(i == 0 ? 0.0 : 1.0 / (rs * rs) - double(k) * k, 0.0);
    }
    std::sort(expected.begin(), expected.end(), detail::descending);
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(rep.eigenvalues[i] - expected[i]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = worst < 1e-6 && secs < 60.0;
  return {3, "cylinder spectrum", ok,
          "worst eigenvalue error " + sci(worst) + " (limit 1e-06) over r*={0.5,1,2}, m=40; wall " + fix(secs, 1) + " s (limit 60 s)"};
}

inline CriterionResult stability_rate(const AcceptanceOptions& opt) {
  StepController c;
  c.scheme = Scheme::SemiImplicitMidpoint;
  c.dt = 0.01;
  c.t_end = 60.0;
  c.mutate_f = opt.mutate_f;
  const auto r0 = ProfileFunction::sample(128, [](double x) { return 2.0 + 0.01 * std::cos(x); });
  const double radius = equivolume_radius(r0);
  const auto traj = evolve(r0, c);
  const double offset = sup_distance(traj.final_profile(), ProfileFunction::constant(128, radius));
  double rate = std::nan("");
  std::string fit_note;
  try {
    rate = fit_exponential_rate(traj, 1);
  } catch (const Error& e) {
    fit_note = std::string(", fit failed: ") + e.what();
  }
  const bool ok = traj.termination == Termination::Converged && offset < 1e-6 && std::abs(rate + 0.75) <= 0.05 * 0.75;
  return {4, "stability rate", ok,
          "termination " + to_string(traj.termination) + ", |r_final - " + fix(radius, 9) + "| = " + sci(offset) +
              " (limit 1e-06), k=1 rate " + fix(rate) + " (target -0.75 +/- 5%)" + fit_note};
}

inline CriterionResult instability_rate(const AcceptanceOptions& opt) {
  StepController c;
  c.scheme = Scheme::SemiImplicitMidpoint;
  c.dt = 1e-3;
  c.t_end = 2.5;
  c.mutate_f = opt.mutate_f;
  c.stop_when = [](double, const ProfileFunction& r) { return mode_amplitude(r, 1) > 1e-2; };
  const auto r0 = ProfileFunction::sample(128, [](double x) { return 0.5 + 1e-5 * std::cos(x); });
  const auto traj = evolve(r0, c);
  double rate = std::nan("");
  std::string fit_note;
  try {
    rate = fit_exponential_rate(traj, 1);
  } catch (const Error& e) {
    fit_note = std::string(", fit failed: ") + e.what();
  }
  const bool ok = std::abs(rate - 3.0) <= 0.05 * 3.0;
  return {5, "instability rate", ok,
          "k=1 growth rate " + fix(rate) + " (target 3 +/- 5%), termination " + to_string(traj.termination) + fit_note};
}

inline CriterionResult equilibria_check(const AcceptanceOptions&) {
  double worst_g = 0.0;
  for (int k : {1, 2}) {
    for (double B : {0.1, 0.3, 0.5, 0.7}) worst_g = std::max(worst_g, amcf_rhs(unduloid_profile(B, k, 512)).sup_norm());
  }
  const double i0 = std::abs(constraint_integral(0.0) - kPi);
  double sym = 0.0;
  for (double B : {0.1, 0.3, 0.4, 0.5, 0.7}) sym = std::max(sym, std::abs(constraint_integral(B) - constraint_integral(-B)));
  const bool ok = worst_g < 1e-6 && i0 < 1e-12 && sym < 1e-12;
  return {6, "equilibria", ok,
          "max |G(unduloid)| " + sci(worst_g) + " (limit 1e-06), |I(0)-pi| " + sci(i0) + ", max |I(B)-I(-B)| " +
              sci(sym) + " (limits 1e-12)"};
}

inline CriterionResult pitchfork_coefficients(const AcceptanceOptions&) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (int ell : {1, 2}) {
    const auto b = trace_branch(ell, 0.1, 10);
    const auto fit = fit_pitchfork(b);
    const double ratio = fit.lambda_ddot0 / (-double(ell) * ell * ell);
    const bool this_ok = !b.truncated && std::abs(fit.lambda_dot0) < 1e-3 && ratio >= 0.95 && ratio <= 1.05;
    ok = ok && this_ok;
    detail += "ell=" + std::to_string(ell) + ": |lambda_dot0| " + sci(std::abs(fit.lambda_dot0)) +
              ", lambda_ddot0 " + fix(fit.lambda_ddot0, 5) + ", ratio to -ell^3 " + fix(ratio, 4) +
              " (target [0.95, 1.05]); ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 300.0;
  return {7, "pitchfork coefficients", ok, detail + "wall " + fix(secs, 1) + " s (limit 300 s)"};
}

inline CriterionResult second_derivative_anchors(const AcceptanceOptions&) {
  bool ok = true;
  std::string detail;
  for (int ell : {1, 2}) {
    const auto rep = second_derivative_checks(ell);
    const bool this_ok = std::abs(rep.mixed_coefficient - rep.mixed_target) <= 1e-3 &&
                         std::abs(rep.pure_coefficient - rep.pure_target) <= 1e-3;
    ok = ok && this_ok;
    detail += "ell=" + std::to_string(ell) + ": mixed " + fix(rep.mixed_coefficient) + " (target " +
              fix(rep.mixed_target, 1) + "), pure " + fix(rep.pure_coefficient) + " (target " +
              fix(rep.pure_target, 1) + "); ";
  }
  return {8, "second-derivative anchors", ok, detail + "tolerance 1e-03"};
}

inline CriterionResult branch_unduloid_equivalence(const AcceptanceOptions&) {
  const auto b = trace_branch(1, 0.1, 10);
  bool ok = !b.truncated;
  std::string detail;
  int matched = 0;
  for (const auto& p : b.points) {
    for (double s : {0.02, 0.05, 0.1}) {
      if (std::abs(p.s - s) > 1e-12) continue;
      ++matched;
      const auto m = compare_with_kenmotsu(p, 1, 256);
      ok = ok && m.distance < 1e-4;
      detail += "s=" + fix(s, 2) + ": B=" + fix(m.B, 6) + " distance " + sci(m.distance) + " lambda-H " +
                sci(m.lambda_minus_H) + "; ";
    }
  }
  ok = ok && matched == 3;
  return {9, "branch-unduloid equivalence", ok, detail + "limit 1e-04"};
}

inline CriterionResult branch_instability(const AcceptanceOptions& opt) {
  bool ok = true;
  double min_eig = std::numeric_limits<double>::infinity();
  for (int ell : {1, 2}) {
    const auto b = trace_branch(ell, 0.1, 10);
    ok = ok && !b.truncated;
    for (const auto& p : b.points) {
      if (p.s > 0.0 && p.s <= 0.1 + 1e-12) min_eig = std::min(min_eig, p.leading_eigenvalue.real());
    }
  }
  ok = ok && min_eig > 0.0;

  // Dynamic departure from the ell = 1 branch point at s = 0.1.
  const auto b = trace_branch(1, 0.1, 10);
  const int n = even_grid_size(b.modes);
  const auto& top = b.points.back();
  const auto rbar = lift_state(top.state, n);
  const double eta = 1.0 / top.state.lambda;
  const auto bump = ProfileFunction::sample(n, [](double x) { return 1e-4 * std::cos(x); });
  const auto r0 = lift(project_zero_mean(project_zero_mean(rbar).function() + bump), eta);
  const double offset0 = sup_distance(r0, rbar);
  StepController c;
  c.scheme = Scheme::SemiImplicitEuler;
  c.dt = 0.05;
  c.t_end = 400.0;
  c.store_profiles = false;
  c.diag_every = 100;
  c.mutate_f = opt.mutate_f;
  c.stop_when = [&](double, const ProfileFunction& r) { return sup_distance(r, rbar) > 10.0 * offset0; };
  const auto traj = evolve(r0, c);
  const bool departed = traj.termination == Termination::Stopped;
  ok = ok && departed;
  return {10, "branch instability", ok,
          "min leading eigenvalue over 0<s<=0.1 (ell=1,2) " + sci(min_eig) + "; perturbation " + sci(offset0) +
              (departed ? " grew tenfold by t=" + fix(traj.times.back(), 2) : " did not grow tenfold (" +
                                                                                   to_string(traj.termination) + ")")};
}

inline CriterionResult non_bifurcation(const AcceptanceOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int m = 32;
  int trivial = 0, total = 0;
  double worst = 0.0;
  for (double lambda : {0.5, 1.5, 2.5}) {
    for (int trial = 0; trial < 20; ++trial) {
      ++total;
      EvenReducedState guess{std::vector<double>(m, 0.0), lambda};
      for (int k = 1; k <= 4; ++k) guess.cos_coeffs[k - 1] = 0.02 * u(rng) / k;
      try {
        const auto sol = solve_fixed_lambda(guess);
        double size = 0.0;
        for (double a : sol.cos_coeffs) size = std::max(size, std::abs(a));
        worst = std::max(worst, size);
        if (size < 1e-8) ++trivial;
      } catch (const Error&) {
      }
    }
  }
  return {11, "non-bifurcation at non-integers", trivial == total,
          std::to_string(trivial) + "/" + std::to_string(total) + " Newton runs reached the trivial solution, max |a_k| " +
              sci(worst)};
}

inline CriterionResult oracle_suite(const AcceptanceOptions& opt) {
  // Curvatures against eighth-order finite differences (n = 512).
  const auto r1 = ProfileFunction::sample(512, [](double x) { return 1.0 + 0.1 * std::cos(x); });
  std::vector<double> v1(r1.values().begin(), r1.values().end());
  const auto rx = oracle::fd8_derivative(v1, 1), rxx = oracle::fd8_derivative(v1, 2);
  const auto curv = principal_curvatures(r1);
  double curv_err = 0.0;
  for (int j = 0; j < 512; ++j) {
    const double w = std::sqrt(1.0 + rx[j] * rx[j]);
    curv_err = std::max({curv_err, std::abs(curv.kappa1[j] - 1.0 / (v1[j] * w)),
                         std::abs(curv.kappa2[j] + rxx[j] / (w * w * w))});
  }
  // Area and averaged curvature against adaptive quadrature.
  const oracle::TrigProfile p_area{1.0, {0.5}, {}};
  const double area_err = std::abs(surface_area(p_area.sample(256)) - oracle::area(p_area));
  const oracle::TrigProfile p_h{1.0, {0.0, 0.3}, {}};
  const double h_err = std::abs(averaged_curvature(p_h.sample(256)) - oracle::averaged_curvature(p_h));
  // Quasilinear reconstruction on random profiles.
  std::mt19937_64 rng(opt.seed);
  double recon = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = oracle::random_profile(rng).sample(256);
    const auto rebuilt = quasilinear_f(r) - quasilinear_apply_A(r, r);
    recon = std::max(recon, sup_distance(rebuilt, amcf_rhs(r)));
  }
  const bool ok = curv_err < 1e-8 && area_err < 1e-10 && h_err < 1e-9 && recon < 1e-10;
  return {12, "oracle suite", ok,
          "curvature " + sci(curv_err) + " (1e-08), area " + sci(area_err) + " (1e-10), h " + sci(h_err) +
              " (1e-09), -A(r)r+f(r)-G(r) " + sci(recon) + " (1e-10, 50 profiles)"};
}

}  // namespace acceptance

using CriterionFn = std::function<CriterionResult(const AcceptanceOptions&)>;

inline const std::vector<std::pair<int, CriterionFn>>& acceptance_criteria() {
  static const std::vector<std::pair<int, CriterionFn>> all{
      {1, acceptance::volume_preservation},        {2, acceptance::area_monotonicity},
      {3, acceptance::cylinder_spectrum_check},    {4, acceptance::stability_rate},
      {5, acceptance::instability_rate},           {6, acceptance::equilibria_check},
      {7, acceptance::pitchfork_coefficients},     {8, acceptance::second_derivative_anchors},
      {9, acceptance::branch_unduloid_equivalence}, {10, acceptance::branch_instability},
      {11, acceptance::non_bifurcation},           {12, acceptance::oracle_suite},
  };
  return all;
}

/// Runs one criterion, timing it and turning library errors into failures.
inline CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  for (const auto& [cid, fn] : acceptance_criteria()) {
    if (cid != id) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = fn(opt);
    } catch (const Error& e) {
      res = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
  throw PreconditionError("no acceptance criterion with id " + std::to_string(id));
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.name << "  [" << std::fixed
     << std::setprecision(1) << r.seconds << " s]  " << r.detail;
  return os.str();
}

/// Runs the selected criteria, printing one line each; returns the results.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : acceptance_criteria()) {
    if (opt.quick && id > 6) continue;
    results.push_back(run_criterion(id, opt));
    out << format_result(results.back()) << std::endl;
  }
  return results;
}

}  // namespace amcf
