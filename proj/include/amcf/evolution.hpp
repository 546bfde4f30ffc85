#pragma once

// Time integration of r_t = G(r) with conservation diagnostics.
//
// Three steppers are provided:
//  * explicit RK4, the reference integrator (dt limited by ~10/n^2);
//  * semi-implicit Euler on the quasilinear split,
//      (I + dt A(r)) r+ = r + dt f(r);
//  * semi-implicit midpoint, the same split evaluated at r_m = (r + r+)/2 and
//    iterated to a fixed point. Its converged step is the implicit midpoint
//    rule, which preserves F(r) = int r^2 exactly because int r G(r) = 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amcf/errors.hpp"
#include "amcf/geometry.hpp"
#include "amcf/reduction.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

enum class Scheme { ExplicitRk4, SemiImplicitEuler, SemiImplicitMidpoint };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ExplicitRk4: return "explicit-rk4";
    case Scheme::SemiImplicitEuler: return "semi-implicit-euler";
    case Scheme::SemiImplicitMidpoint: return "semi-implicit-midpoint";
  }
  return "unknown";
}

inline std::optional<Scheme> parse_scheme(const std::string& s) {
  if (s == "explicit-rk4" || s == "rk4") return Scheme::ExplicitRk4;
  if (s == "semi-implicit-euler" || s == "euler") return Scheme::SemiImplicitEuler;
  if (s == "semi-implicit-midpoint" || s == "midpoint") return Scheme::SemiImplicitMidpoint;
  return std::nullopt;
}

enum class Termination { ReachedTEnd, Converged, PositivityBreach, StepFailure, Stopped };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTEnd: return "reached-t-end";
    case Termination::Converged: return "converged";
    case Termination::PositivityBreach: return "positivity-breach";
    case Termination::StepFailure: return "step-failure";
    case Termination::Stopped: return "stopped";
  }
  return "unknown";
}

struct StepController {
  Scheme scheme = Scheme::SemiImplicitMidpoint;
  double dt = 1e-3;
  double t_end = 1.0;
  double tol_equilibrium = 1e-9;  // sup |G| below which the run is converged
  double r_min_floor = 1e-6;
  int diag_every = 1;
  bool project_volume = false;  // r <- lift(P0 r, eta(r0)) after every step
  bool store_profiles = true;
  bool mutate_f = false;  // mutation hook: semi-implicit steps use 2pi w/S + 1/r for f(r)
  int max_fixed_point_iterations = 50;
  double fixed_point_tol = 1e-13;
  /// Optional observer; returning true ends the run with Termination::Stopped.
  std::function<bool(double, const ProfileFunction&)> stop_when;

  void validate() const {
    if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
    if (!(t_end > 0.0)) throw PreconditionError("t_end must be positive");
    if (!(tol_equilibrium > 0.0)) throw PreconditionError("tol_equilibrium must be positive");
    if (!(r_min_floor > 0.0)) throw PreconditionError("r_min_floor must be positive");
    if (diag_every < 1) throw PreconditionError("diag_every must be >= 1");
  }
};

struct DiagnosticRecord {
  double t = 0.0;
  double min_r = 0.0;
  double volume = 0.0;
  double area = 0.0;
  double h_avg = 0.0;
  double g_inf = 0.0;
};

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<ProfileFunction> profiles;  // empty when store_profiles is off
  std::vector<DiagnosticRecord> diagnostics;
  Termination termination = Termination::ReachedTEnd;
  std::string message;
  long steps = 0;

  const ProfileFunction& final_profile() const { return final_; }
  ProfileFunction final_;
};

// ---------------------------------------------------------------------------
// Steppers

/// Largest RK4 step considered stable: 10 / (n^2 max 1/(1 + r_x^2)). The RK4
/// stability interval on the negative real axis is about 2.78 and the stiffest
/// resolved mode of G scales like (n/2)^2 / (1 + r_x^2).
inline double rk4_stable_dt(const ProfileFunction& r) {
  const auto rx = derivative(r, 1);
  double worst = 0.0;
  for (int j = 0; j < r.size(); ++j) worst = std::max(worst, 1.0 / (1.0 + rx[j] * rx[j]));
  const double n = r.size();
  return 10.0 / (n * n * worst);
}

namespace detail {

inline void check_floor(const ProfileFunction& r, double floor, const char* where) {
  if (!(r.min() > floor)) {
    throw PositivityError(std::string(where) + ": min r = " + std::to_string(r.min()) +
                          " reached the floor " + std::to_string(floor));
  }
}

inline Eigen::VectorXd as_vector(const ProfileFunction& u) {
  return Eigen::Map<const Eigen::VectorXd>(u.values().data(), u.size());
}

inline ProfileFunction from_vector(const Eigen::VectorXd& v) {
  return ProfileFunction::from_values(std::vector<double>(v.data(), v.data() + v.size()));
}

// f(r), or with `mutate` the sign-flipped variant 2pi w/S + 1/r. Flipping the
// sign of the whole of f would go unnoticed by volume diagnostics, because
// int r f(r) = 0 holds identically; flipping the 1/r term does not.
inline Eigen::VectorXd split_f(const ProfileFunction& r, bool mutate) {
  Eigen::VectorXd f = as_vector(quasilinear_f(r));
  if (mutate) {
    for (int j = 0; j < r.size(); ++j) f[j] += 2.0 / r[j];
  }
  return f;
}

inline Eigen::VectorXd solve_checked(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    throw NumericalError("semi-implicit system ill-conditioned (condition estimate " +
                         std::to_string(1.0 / rcond) + ")");
  }
  return lu.solve(rhs);
}

}  // namespace detail

/// One classical RK4 step of r_t = G(r).
inline ProfileFunction step_rk4(const ProfileFunction& r, double dt, double r_min_floor = 1e-6) {
  detail::check_floor(r, r_min_floor, "step_rk4");
  const double bound = rk4_stable_dt(r);
  if (dt > bound) {
    throw PreconditionError("RK4 step " + std::to_string(dt) + " exceeds stability bound " +
                            std::to_string(bound));
  }
  const auto k1 = amcf_rhs(r);
  const auto s2 = linear_combination(1.0, r, 0.5 * dt, k1);
  detail::check_floor(s2, r_min_floor, "step_rk4 stage 2");
  const auto k2 = amcf_rhs(s2);
  const auto s3 = linear_combination(1.0, r, 0.5 * dt, k2);
  detail::check_floor(s3, r_min_floor, "step_rk4 stage 3");
  const auto k3 = amcf_rhs(s3);
  const auto s4 = linear_combination(1.0, r, dt, k3);
  detail::check_floor(s4, r_min_floor, "step_rk4 stage 4");
  const auto k4 = amcf_rhs(s4);
  std::vector<double> out(r.size());
  for (int j = 0; j < r.size(); ++j) {
    out[j] = r[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  auto next = ProfileFunction::from_values(std::move(out));
  detail::check_floor(next, r_min_floor, "step_rk4");
  return next;
}

/// Linearly implicit Euler step: (I + dt A(r)) r+ = r + dt f(r).
inline ProfileFunction step_semi_implicit(const ProfileFunction& r, double dt, double r_min_floor = 1e-6,
                                          bool mutate_f = false) {
  detail::check_floor(r, r_min_floor, "step_semi_implicit");
  Eigen::MatrixXd m = dt * quasilinear_matrix(r);
  m.diagonal().array() += 1.0;
  const Eigen::VectorXd rhs = detail::as_vector(r) + dt * detail::split_f(r, mutate_f);
  auto next = detail::from_vector(detail::solve_checked(m, rhs));
  detail::check_floor(next, r_min_floor, "step_semi_implicit");
  return next;
}

/// Semi-implicit midpoint step
///   (I + dt/2 A(r_m)) r+ = (I - dt/2 A(r_m)) r + dt f(r_m),  r_m = (r + r+)/2,
/// with r_m updated by fixed-point iteration until successive iterates agree
/// to `tol` in sup norm.
inline ProfileFunction step_semi_implicit_midpoint(const ProfileFunction& r, double dt,
                                                   double r_min_floor = 1e-6, bool mutate_f = false,
                                                   int max_iterations = 50, double tol = 1e-13) {
  detail::check_floor(r, r_min_floor, "step_semi_implicit_midpoint");
  const Eigen::VectorXd r0 = detail::as_vector(r);
  Eigen::VectorXd current = r0;
  for (int it = 0; it < max_iterations; ++it) {
    const auto mid = detail::from_vector(0.5 * (r0 + current));
    detail::check_floor(mid, r_min_floor, "step_semi_implicit_midpoint");
    const Eigen::MatrixXd a = quasilinear_matrix(mid);
    Eigen::MatrixXd m = (0.5 * dt) * a;
    m.diagonal().array() += 1.0;
    const Eigen::VectorXd rhs = r0 - (0.5 * dt) * (a * r0) + dt * detail::split_f(mid, mutate_f);
    const Eigen::VectorXd next = detail::solve_checked(m, rhs);
    const double change = (next - current).lpNorm<Eigen::Infinity>();
    current = next;
    if (change <= tol * (1.0 + r0.lpNorm<Eigen::Infinity>())) {
      auto out = detail::from_vector(current);
      detail::check_floor(out, r_min_floor, "step_semi_implicit_midpoint");
      return out;
    }
  }
  throw NumericalError("semi-implicit midpoint fixed point did not converge in " +
                       std::to_string(max_iterations) + " iterations");
}

inline ProfileFunction take_step(const ProfileFunction& r, double dt, const StepController& c) {
  switch (c.scheme) {
    case Scheme::ExplicitRk4: return step_rk4(r, dt, c.r_min_floor);
    case Scheme::SemiImplicitEuler: return step_semi_implicit(r, dt, c.r_min_floor, c.mutate_f);
    case Scheme::SemiImplicitMidpoint:
      return step_semi_implicit_midpoint(r, dt, c.r_min_floor, c.mutate_f, c.max_fixed_point_iterations,
                                         c.fixed_point_tol);
  }
  throw PreconditionError("unknown scheme");
}

// ---------------------------------------------------------------------------
// Driver

inline DiagnosticRecord diagnose(double t, const ProfileFunction& r) {
  const auto s = summarize(r);
  return {t, s.min_r, s.volume, s.area, s.h_avg, s.g_norm};
}

/// Integrates r_t = G(r) from r0 until t_end, convergence, a positivity
/// breach, a failed step or the observer's stop signal. Every termination is
/// reported in the trajectory.
inline FlowTrajectory evolve(const ProfileFunction& r0, const StepController& c) {
  c.validate();
  require_positive(r0, "evolve");
  if (c.scheme == Scheme::ExplicitRk4 && c.dt > rk4_stable_dt(r0)) {
    throw PreconditionError("RK4 step " + std::to_string(c.dt) + " exceeds stability bound " +
                            std::to_string(rk4_stable_dt(r0)));
  }
  const double eta0 = equivolume_radius(r0);

  FlowTrajectory traj;
  auto record = [&](double t, const ProfileFunction& r) {
    traj.times.push_back(t);
    traj.diagnostics.push_back(diagnose(t, r));
    if (c.store_profiles) traj.profiles.push_back(r);
  };

  ProfileFunction r = r0;
  double t = 0.0;
  record(t, r);
  if (traj.diagnostics.back().g_inf < c.tol_equilibrium) {
    traj.termination = Termination::Converged;
    traj.final_ = r;
    return traj;
  }

  const double t_eps = 1e-12 * std::max(1.0, c.t_end);
  traj.termination = Termination::ReachedTEnd;
  while (t < c.t_end - t_eps) {
    const double h = std::min(c.dt, c.t_end - t);
    ProfileFunction next;
    try {
      next = take_step(r, h, c);
      if (c.project_volume) next = lift(project_zero_mean(next), eta0);
    } catch (const PositivityError& e) {
      traj.termination = Termination::PositivityBreach;
      traj.message = e.what();
      break;
    } catch (const NumericalError& e) {
      traj.termination = Termination::StepFailure;
      traj.message = e.what();
      break;
    } catch (const VolumeLiftError& e) {
      traj.termination = Termination::StepFailure;
      traj.message = e.what();
      break;
    }
    r = std::move(next);
    t += h;
    ++traj.steps;

    const double g = amcf_rhs(r).sup_norm();
    const bool converged = g < c.tol_equilibrium;
    const bool last = t >= c.t_end - t_eps;
    const bool stop = c.stop_when && c.stop_when(t, r);
    if (traj.steps % c.diag_every == 0 || converged || last || stop) record(t, r);
    if (converged) {
      traj.termination = Termination::Converged;
      break;
    }
    if (stop) {
      traj.termination = Termination::Stopped;
      break;
    }
  }
  traj.final_ = r;
  return traj;
}

// ---------------------------------------------------------------------------
// Rate fitting

/// Least-squares slope of log(mode amplitude) against time, over the records
/// whose wavenumber-k amplitude lies in [lo, hi].
inline double fit_exponential_rate(const FlowTrajectory& traj, int mode_k, double lo = 1e-8, double hi = 1e-3) {
  if (traj.profiles.size() != traj.times.size()) {
    throw InsufficientDataError("trajectory has no stored profiles");
  }
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double a = mode_amplitude(traj.profiles[i], mode_k);
    if (a >= lo && a <= hi) {
      ts.push_back(traj.times[i]);
      ls.push_back(std::log(a));
    }
  }
  if (ts.size() < 10) {
    throw InsufficientDataError("only " + std::to_string(ts.size()) +
                                " records inside the linear window; need at least 10");
  }
  const double n = static_cast<double>(ts.size());
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
  }
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) throw InsufficientDataError("linear window spans a single time");
  return (n * stl - st * sl) / denom;
}

/// Largest amplitude among `amplitudes` for which r* + a cos(kx) converges
/// under `c`; 0 when none does. Reported as an empirical stability radius.
inline double largest_converging_amplitude(double r_star, int k, const std::vector<double>& amplitudes, int n,
                                           StepController c) {
  c.store_profiles = false;
  double best = 0.0;
  for (double a : amplitudes) {
    const auto r0 = ProfileFunction::sample(n, [&](double x) { return r_star + a * std::cos(k * x); });
    if (!(r0.min() > 0.0)) continue;
    if (evolve(r0, c).termination == Termination::Converged) best = std::max(best, a);
  }
  return best;
}

}  // namespace amcf
