#pragma once

// Bifurcation from cylinders in the reduced even problem
//
//   Gbar(rt, lambda) = P0 G(lift(rt, 1/lambda)) = 0,   rt = sum_{k=1}^m a_k cos kx.
//
// Branches leave the trivial line (0, lambda) at lambda = ell and are traced
// by pinning the kernel amplitude a_ell = s.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "amcf/equilibria.hpp"
#include "amcf/errors.hpp"
#include "amcf/reduction.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

struct EvenReducedState {
  std::vector<double> cos_coeffs;  // a_1 .. a_m
  double lambda = 1.0;

  int modes() const { return static_cast<int>(cos_coeffs.size()); }
};

/// Default truncation max(32, 8 ell).
inline int default_modes(int ell) { return std::max(32, 8 * ell); }

/// Grid used to evaluate the reduced operator for m cosine modes.
inline int even_grid_size(int m) { return 4 * m; }

/// sum a_k cos kx on an n-point grid.
inline ZeroMeanFunction even_function(const std::vector<double>& a, int n) {
  check_grid_size(n);
  if (2 * static_cast<int>(a.size()) >= n) throw PreconditionError("too many cosine modes for the grid");
  std::vector<Complex> c(n, Complex(0.0, 0.0));
  for (std::size_t k = 1; k <= a.size(); ++k) {
    c[k] = Complex(0.5 * a[k - 1], 0.0);
    c[n - k] = c[k];
  }
  return ZeroMeanFunction::from_coefficients(std::move(c));
}

/// Lifted profile lift(rt, 1/lambda) on an n-point grid.
inline ProfileFunction lift_state(const EvenReducedState& state, int n) {
  if (!(state.lambda > 0.0)) throw DomainError("lambda must be positive");
  return lift(even_function(state.cos_coeffs, n), 1.0 / state.lambda);
}

/// Cosine coefficients 1..m of Gbar(rt, lambda). The sine part of the result
/// must vanish; a violation above 1e-10 raises ConsistencyError.
inline std::vector<double> reduced_even_rhs(const EvenReducedState& state, int n = 0) {
  const int m = state.modes();
  if (m < 1) throw PreconditionError("state needs at least one cosine mode");
  if (n == 0) n = even_grid_size(m);
  const auto g = reduced_rhs(even_function(state.cos_coeffs, n), 1.0 / state.lambda);
  double odd = 0.0;
  for (int k = 1; k < n / 2; ++k) odd = std::max(odd, 2.0 * std::abs(g.coefficient(k).imag()));
  if (odd > 1e-10) {
    throw ConsistencyError("reduced operator broke evenness (sine part " + std::to_string(odd) + ")");
  }
  std::vector<double> out(m);
  for (int k = 1; k <= m; ++k) out[k - 1] = 2.0 * g.coefficient(k).real();
  return out;
}

namespace detail {

inline double state_norm(const EvenReducedState& s) {
  double v = std::abs(s.lambda);
  for (double a : s.cos_coeffs) v = std::max(v, std::abs(a));
  return v;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Central-difference Jacobian of reduced_even_rhs with respect to a_1..a_m
// and, when with_lambda is set, lambda as the last column.
inline Eigen::MatrixXd even_jacobian(const EvenReducedState& s, bool with_lambda, int n) {
  const int m = s.modes();
  const double h = 1e-7 * (1.0 + state_norm(s));
  Eigen::MatrixXd jac(m, with_lambda ? m + 1 : m);
  for (int j = 0; j < jac.cols(); ++j) {
    EvenReducedState plus = s, minus = s;
    if (j < m) {
      plus.cos_coeffs[j] += h;
      minus.cos_coeffs[j] -= h;
    } else {
      plus.lambda += h;
      minus.lambda -= h;
    }
    jac.col(j) = (to_eigen(reduced_even_rhs(plus, n)) - to_eigen(reduced_even_rhs(minus, n))) / (2.0 * h);
  }
  return jac;
}

}  // namespace detail

/// Leading eigenvalue of D1 Gbar(rt, lambda) on the cosine basis.
inline Complex leading_even_eigenvalue(const EvenReducedState& s, int n = 0) {
  if (n == 0) n = even_grid_size(s.modes());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(detail::even_jacobian(s, false, n), false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  Complex best = solver.eigenvalues()[0];
  for (int i = 1; i < solver.eigenvalues().size(); ++i) {
    const Complex e = solver.eigenvalues()[i];
    if (e.real() > best.real()) best = e;
  }
  return best;
}

struct CorrectorOptions {
  int max_iterations = 25;
  double tol = 1e-10;
};

/// Newton solve of {Gbar(rt, lambda) = 0, a_ell = s} for (a_1..a_m, lambda).
/// Returns the guess unchanged when it already satisfies the system.
inline EvenReducedState corrector(EvenReducedState guess, int ell, double s, CorrectorOptions opt = {}) {
  const int m = guess.modes();
  if (ell < 1) throw PreconditionError("ell must be >= 1");
  if (m < 4 * ell) throw PreconditionError("corrector needs at least 4 ell cosine modes");
  const int n = even_grid_size(m);

  auto residual = [&](const EvenReducedState& st) {
    Eigen::VectorXd r(m + 1);
    r.head(m) = detail::to_eigen(reduced_even_rhs(st, n));
    r[m] = st.cos_coeffs[ell - 1] - s;
    return r;
  };

  EvenReducedState cur = std::move(guess);
  Eigen::VectorXd res = residual(cur);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
    Eigen::MatrixXd jac(m + 1, m + 1);
    jac.topRows(m) = detail::even_jacobian(cur, true, n);
    jac.row(m).setZero();
    jac(m, ell - 1) = 1.0;
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-res);
    if (!step.allFinite()) throw NoConvergenceError("corrector produced a non-finite step");
    for (int k = 0; k < m; ++k) cur.cos_coeffs[k] += step[k];
    cur.lambda += step[m];
    res = residual(cur);
  }
  if (res.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
  throw NoConvergenceError("corrector did not reach residual " + std::to_string(opt.tol) + " (last " +
                           std::to_string(res.lpNorm<Eigen::Infinity>()) + ")");
}

/// Newton solve of Gbar(rt, lambda) = 0 at fixed lambda.
inline EvenReducedState solve_fixed_lambda(EvenReducedState guess, CorrectorOptions opt = {}) {
  const int m = guess.modes();
  const int n = even_grid_size(m);
  EvenReducedState cur = std::move(guess);
  Eigen::VectorXd res = detail::to_eigen(reduced_even_rhs(cur, n));
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
    const Eigen::VectorXd step = detail::even_jacobian(cur, false, n).partialPivLu().solve(-res);
    if (!step.allFinite()) throw NoConvergenceError("Newton produced a non-finite step");
    for (int k = 0; k < m; ++k) cur.cos_coeffs[k] += step[k];
    res = detail::to_eigen(reduced_even_rhs(cur, n));
  }
  if (res.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
  throw NoConvergenceError("fixed-lambda Newton did not converge");
}

struct BranchPoint {
  double s = 0.0;
  EvenReducedState state;
  double residual = 0.0;
  Complex leading_eigenvalue;
};

struct PitchforkFit {
  double lambda0 = 0.0;
  double lambda_dot0 = 0.0;
  double lambda_ddot0 = 0.0;
  int points_used = 0;
};

struct Branch {
  int ell = 1;
  int modes = 0;
  std::vector<BranchPoint> points;  // ordered by s
  bool truncated = false;
  std::string message;
  std::optional<PitchforkFit> pitchfork_fit;
};

namespace detail {

inline BranchPoint make_point(double s, EvenReducedState st) {
  BranchPoint p;
  p.s = s;
  const auto r = reduced_even_rhs(st);
  for (double v : r) p.residual = std::max(p.residual, std::abs(v));
  p.leading_eigenvalue = leading_even_eigenvalue(st);
  p.state = std::move(st);
  return p;
}

// Continuation from s = 0 in the direction of `sign`; returns the points with
// s != 0 in order of increasing |s|.
inline std::vector<BranchPoint> trace_direction(int ell, int m, double s_max, int steps, double sign,
                                                bool& truncated, std::string& message) {
  std::vector<BranchPoint> out;
  EvenReducedState prev{std::vector<double>(m, 0.0), double(ell)};
  std::optional<EvenReducedState> prev2;
  double s_prev = 0.0, s_prev2 = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double s = sign * s_max * i / steps;
    EvenReducedState guess = prev;
    if (prev2) {
      const double t = (s - s_prev) / (s_prev - s_prev2);
      for (int k = 0; k < m; ++k) guess.cos_coeffs[k] += t * (prev.cos_coeffs[k] - prev2->cos_coeffs[k]);
      guess.lambda += t * (prev.lambda - prev2->lambda);
    }
    guess.cos_coeffs[ell - 1] = s;
    EvenReducedState sol;
    try {
      sol = corrector(guess, ell, s);
    } catch (const Error& e) {
      truncated = true;
      message = "corrector failed at s = " + std::to_string(s) + ": " + e.what();
      break;
    }
    prev2 = prev;
    s_prev2 = s_prev;
    prev = sol;
    s_prev = s;
    out.push_back(make_point(s, std::move(sol)));
  }
  return out;
}

}  // namespace detail

/// Natural-parameter continuation of the ell-th branch over s in
/// [-s_max, s_max] with `steps` points per side and secant predictors.
/// A corrector failure truncates the branch; the reason is kept in message.
inline Branch trace_branch(int ell, double s_max, int steps, int modes = 0) {
  if (ell < 1) throw PreconditionError("ell must be >= 1");
  if (!(s_max > 0.0) || steps < 1) throw PreconditionError("s_max must be positive and steps >= 1");
  const int m = modes > 0 ? modes : default_modes(ell);
  if (s_max * s_max / 2.0 >= 1.0 / (double(ell) * ell)) {
    throw PreconditionError("s_max exceeds lift admissibility at eta = 1/ell");
  }
  Branch b;
  b.ell = ell;
  b.modes = m;
  auto neg = detail::trace_direction(ell, m, s_max, steps, -1.0, b.truncated, b.message);
  auto pos = detail::trace_direction(ell, m, s_max, steps, 1.0, b.truncated, b.message);
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) b.points.push_back(std::move(*it));
  b.points.push_back(detail::make_point(0.0, EvenReducedState{std::vector<double>(m, 0.0), double(ell)}));
  for (auto& p : pos) b.points.push_back(std::move(p));
  return b;
}

/// Least-squares fits of lambda(s) over |s| <= s_window: an even quartic
/// lambda0 + c2 s^2 + c4 s^4 gives lambda_ddot0 = 2 c2; an odd cubic fitted to
/// what the even part leaves behind gives lambda_dot0.
inline PitchforkFit fit_pitchfork(const Branch& b, double s_window = 0.1) {
  std::vector<double> s, lam;
  for (const auto& p : b.points) {
    if (std::abs(p.s) <= s_window + 1e-14) {
      s.push_back(p.s);
      lam.push_back(p.state.lambda);
    }
  }
  if (s.size() < 7) {
    throw InsufficientDataError("pitchfork fit needs at least 7 points with |s| <= " + std::to_string(s_window));
  }
  const int q = static_cast<int>(s.size());
  Eigen::MatrixXd even(q, 3), odd(q, 2);
  Eigen::VectorXd y(q);
  for (int i = 0; i < q; ++i) {
    const double s2 = s[i] * s[i];
    even.row(i) << 1.0, s2, s2 * s2;
    odd.row(i) << s[i], s[i] * s2;
    y[i] = lam[i];
  }
  const Eigen::VectorXd ce = even.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd rest = y - even * ce;
  const Eigen::VectorXd co = odd.colPivHouseholderQr().solve(rest);
  return {ce[0], co[0], 2.0 * ce[1], q};
}

struct KenmotsuMatch {
  double B = 0.0;
  double H = 0.0;
  double distance = 0.0;           // L-infinity after phase alignment
  double lambda_minus_H = 0.0;     // reported, not asserted
};

/// Matches a branch point to the Kenmotsu unduloid of period 2pi/ell with the
/// same peak-to-trough amplitude (bisection on B) and returns the L-infinity
/// distance between the lifted branch profile and that unduloid.
inline KenmotsuMatch compare_with_kenmotsu(const BranchPoint& p, int ell, int n = 256) {
  const auto r = lift_state(p.state, n);
  KenmotsuMatch out;
  const Complex c = r.coefficient(ell);
  if (std::abs(c) == 0.0) {
    out.H = double(ell);
    out.distance = sup_distance(r, ProfileFunction::constant(n, 1.0 / ell));
    out.lambda_minus_H = p.state.lambda - out.H;
    return out;
  }
  const auto aligned = translate(r, std::arg(c) / ell);
  const double amplitude = evaluate(aligned, 0.0) - evaluate(aligned, kPi / ell);
  auto amp_of = [ell](double B) { return 2.0 * B / h_for(B, ell); };
  double lo = 0.0, hi = kDefaultMaxB;
  if (!(amplitude > 0.0) || amplitude > amp_of(hi)) {
    throw MismatchError("no Kenmotsu parameter in (0, 0.99) matches amplitude " + std::to_string(amplitude));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (amp_of(mid) < amplitude ? lo : hi) = mid;
  }
  out.B = 0.5 * (lo + hi);
  out.H = h_for(out.B, ell);
  out.distance = sup_distance(aligned, unduloid_profile(out.B, ell, n));
  out.lambda_minus_H = p.state.lambda - out.H;
  return out;
}

struct SecondDerivativeReport {
  int ell = 1;
  double mixed_coefficient = 0.0;  // cos(ell x) coefficient of D12 Gbar(0, ell) cos(ell x)
  double mixed_target = 0.0;
  double pure_coefficient = 0.0;   // cos(2 ell x) coefficient of D11 Gbar(0, ell)[v, v]
  double pure_target = 0.0;
};

/// Central-difference second derivatives of Gbar at (0, ell) in the
/// directions (cos ell x, lambda) and (cos ell x, cos ell x), compared with
/// the reference targets -2 ell and -ell^3 / 2.
inline SecondDerivativeReport second_derivative_checks(int ell, double eps = 1e-4, int modes = 0) {
  if (ell < 1) throw PreconditionError("ell must be >= 1");
  const int m = modes > 0 ? modes : default_modes(ell);
  auto eval = [&](double a, double lambda) {
    EvenReducedState st{std::vector<double>(m, 0.0), lambda};
    st.cos_coeffs[ell - 1] = a;
    return detail::to_eigen(reduced_even_rhs(st));
  };
  const double L = ell;
  const Eigen::VectorXd mixed =
      (eval(eps, L + eps) - eval(eps, L - eps) - eval(-eps, L + eps) + eval(-eps, L - eps)) / (4.0 * eps * eps);
  const Eigen::VectorXd pure = (eval(eps, L) - 2.0 * eval(0.0, L) + eval(-eps, L)) / (eps * eps);
  SecondDerivativeReport rep;
  rep.ell = ell;
  rep.mixed_coefficient = mixed[ell - 1];
  rep.mixed_target = -2.0 * L;
  rep.pure_coefficient = pure[2 * ell - 1];
  rep.pure_target = -0.5 * L * L * L;
  return rep;
}

}  // namespace amcf
