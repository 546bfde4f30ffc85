#pragma once

// Equilibria of the flow: cylinders and the Kenmotsu unduloids
//
//   x(s) = int_{pi/2H}^{s} g(Ht) dt,   y(s) = sqrt(1 + B^2 + 2B sin(Hs)) / H,
//   g(t) = (1 + B sin t) / sqrt(1 + B^2 + 2B sin t),
//
// whose x-period is 2pi/k exactly when pi H / k = I(B) = int_{pi/2}^{3pi/2} g.

// pchip.hpp calls isnan unqualified; this makes boost::math::isnan visible to it.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "amcf/errors.hpp"
#include "amcf/geometry.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

inline constexpr double kDefaultMaxB = 0.99;

struct UnduloidParams {
  double H = 1.0;
  double B = 0.0;
  int k = 1;
};

namespace detail {

inline double kenmotsu_integrand(double t, double B) {
  const double st = std::sin(t);
  return (1.0 + B * st) / std::sqrt(1.0 + B * B + 2.0 * B * st);
}

inline void check_shape_parameter(double B) {
  if (!(std::abs(B) < 1.0)) {
    throw DomainError("shape parameter must satisfy |B| < 1 (got " + std::to_string(B) + ")");
  }
}

inline void check_params(const UnduloidParams& p) {
  check_shape_parameter(p.B);
  if (!(p.H > 0.0)) throw DomainError("mean curvature H must be positive");
  if (p.k < 1) throw DomainError("period count k must be >= 1");
}

}  // namespace detail

/// I(B) = int_{pi/2}^{3pi/2} (1 + B sin t) / sqrt(1 + B^2 + 2B sin t) dt.
inline double constraint_integral(double B) {
  detail::check_shape_parameter(B);
  auto g = [B](double t) { return detail::kenmotsu_integrand(t, B); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.5 * kPi, 1.5 * kPi, 20, 1e-15);
}

/// H = k I(B) / pi.
inline double h_for(double B, int k) {
  if (k < 1) throw DomainError("period count k must be >= 1");
  return k * constraint_integral(B) / kPi;
}

inline UnduloidParams unduloid_params(double B, int k) { return {h_for(B, k), B, k}; }

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Point of the undulary curve at arclength s.
inline CurvePoint kenmotsu_point(double s, const UnduloidParams& p) {
  detail::check_params(p);
  const double H = p.H, B = p.B;
  const double s0 = 0.5 * kPi / H;
  double x = 0.0;
  if (B == 0.0) {
    x = s - s0;
  } else if (s != s0) {
    auto g = [H, B](double t) { return detail::kenmotsu_integrand(H * t, B); };
    x = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, s0, s, 20, 1e-15);
  }
  const double y = std::sqrt(1.0 + B * B + 2.0 * B * std::sin(H * s)) / H;
  return {x, y};
}

/// Unduloid sampled on the n-point grid of [-pi, pi): k arclength periods,
/// even in x, with its extremal radius (1 + B)/H at x = 0.
///
/// Half a period of the curve is tabulated on 16n Gauss-Legendre panels in
/// the angle theta = Hs. Each grid abscissa is mapped into [0, pi/k], an
/// initial theta comes from monotone cubic (pchip) inversion of the table,
/// and Newton's method on x(theta) with x' = g(theta)/H polishes it.
inline ProfileFunction unduloid_profile(double B, int k, int n, double max_abs_B = kDefaultMaxB) {
  check_grid_size(n);
  detail::check_shape_parameter(B);
  if (!(std::abs(B) <= max_abs_B)) {
    throw DomainError("|B| exceeds the configured cap " + std::to_string(max_abs_B));
  }
  if (k < 1) throw DomainError("period count k must be >= 1");
  if (B == 0.0) return ProfileFunction::constant(n, 1.0 / k);

  const double I = constraint_integral(B);
  const double H = k * I / kPi;
  using Rule = boost::math::quadrature::gauss<double, 10>;
  auto g = [B](double t) { return detail::kenmotsu_integrand(t, B); };

  // Cumulative J(theta) = int_{pi/2}^{theta} g on [pi/2, 3pi/2].
  const int panels = 16 * n;
  const double a = 0.5 * kPi, width = kPi / panels;
  std::vector<double> theta(panels + 1), J(panels + 1);
  theta[0] = a;
  J[0] = 0.0;
  for (int i = 0; i < panels; ++i) {
    theta[i + 1] = a + (i + 1) * width;
    J[i + 1] = J[i] + Rule::integrate(g, theta[i], theta[i + 1]);
  }
  const double half_extent = J[panels] / H;
  if (std::abs(half_extent - kPi / k) > 1e-6) {
    throw ConsistencyError("unduloid x-extent " + std::to_string(2.0 * half_extent) + " differs from 2pi/k");
  }

  auto J_at = [&](double th) {
    int i = static_cast<int>((th - a) / width);
    i = std::clamp(i, 0, panels - 1);
    return J[i] + (th == theta[i] ? 0.0 : Rule::integrate(g, theta[i], th));
  };

  // Inverse map J -> theta; pchip takes ownership of its copies.
  std::vector<double> knots = J, values = theta;
  boost::math::interpolators::pchip<std::vector<double>> inverse(std::move(knots), std::move(values));

  const double period = kTwoPi / k;
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) {
    double u = std::fmod(std::abs(grid_point(n, j)), period);
    if (u > 0.5 * period) u = period - u;
    const double target = std::min(H * u, J[panels]);
    double th = inverse(target);
    for (int it = 0; it < 8; ++it) {
      const double step = (J_at(th) - target) / g(th);
      th = std::clamp(th - step, a, a + kPi);
      if (std::abs(step) < 1e-15) break;
    }
    r[j] = std::sqrt(1.0 + B * B + 2.0 * B * std::sin(th)) / H;
  }
  return ProfileFunction::from_values(std::move(r));
}

enum class EquilibriumKind { Cylinder, Unduloid, NotEquilibrium };

inline std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Cylinder: return "cylinder";
    case EquilibriumKind::Unduloid: return "unduloid";
    case EquilibriumKind::NotEquilibrium: return "not-equilibrium";
  }
  return "unknown";
}

struct EquilibriumClass {
  EquilibriumKind kind = EquilibriumKind::NotEquilibrium;
  double residual = 0.0;  // sup |G(r)|
  double radius = 0.0;    // cylinder radius
  double B = 0.0;
  int k = 0;
  double shift = 0.0;               // translation aligning the maximum with x = 0
  double regeneration_error = 0.0;  // L-infinity distance to unduloid(B, k)
};

/// Classifies r as a cylinder, an unduloid or a non-equilibrium. Unduloids are
/// recognised from the dominant wavenumber and the extremal radii after phase
/// alignment, then confirmed by regenerating the profile.
inline EquilibriumClass classify_equilibrium(const ProfileFunction& r, double tol = 1e-6,
                                             double regeneration_tol = 1e-5) {
  require_positive(r, "classify_equilibrium");
  EquilibriumClass out;
  out.residual = amcf_rhs(r).sup_norm();
  if (!(out.residual < tol)) return out;

  const int n = r.size();
  if (r.max() - r.min() <= 1e-12 * r.max()) {
    out.kind = EquilibriumKind::Cylinder;
    out.radius = r.mean();
    return out;
  }

  int k = 1;
  for (int q = 2; q < n / 2; ++q) {
    if (std::abs(r.coefficient(q)) > std::abs(r.coefficient(k))) k = q;
  }
  const double a = std::arg(r.coefficient(k)) / k;
  const auto aligned = translate(r, a);
  const double top = evaluate(aligned, 0.0);
  const double bottom = evaluate(aligned, kPi / k);
  const double B = (top - bottom) / (top + bottom);
  if (!(B > 0.0 && B < 1.0)) return out;

  ProfileFunction regenerated;
  try {
    regenerated = unduloid_profile(B, k, n, 1.0 - 1e-12);
  } catch (const Error&) {
    return out;
  }
  out.regeneration_error = sup_distance(aligned, regenerated);
  if (out.regeneration_error <= regeneration_tol) {
    out.kind = EquilibriumKind::Unduloid;
    out.B = B;
    out.k = k;
    out.shift = a;
  }
  return out;
}

}  // namespace amcf
