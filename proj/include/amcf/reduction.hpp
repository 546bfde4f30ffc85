#pragma once

// Volume-constrained reduction. A profile r splits as r = P0 r + Q0 r; the
// mean is recovered from the conserved volume F(r) = int r^2, so zero-mean
// functions parametrize each equivolume set. Because F is quadratic the lift
// has the closed form
//
//   lift(rt, eta) = rt + sqrt(eta^2 - ||rt||^2 / 2pi),
//
// valid on the explicit admissible set ||rt||^2 / 2pi < eta^2.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "amcf/errors.hpp"
#include "amcf/geometry.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

struct LiftContext {
  double eta = 1.0;  // reference cylinder radius
  std::string sigma_note = "h^{2+alpha}_0";

  /// True when `rt` lies in the lift's admissible set for this eta.
  bool admissible(const ZeroMeanFunction& rt) const {
    return eta > 0.0 && l2_norm_squared(rt.function()) / kTwoPi < eta * eta;
  }
};

/// Radius of the cylinder enclosing the same volume as r.
inline double equivolume_radius(const ProfileFunction& r) { return std::sqrt(enclosed_volume(r) / kTwoPi); }

/// Mean value c that places rt + c on the equivolume set of the cylinder eta.
inline double lift_constant(const ZeroMeanFunction& rt, double eta) {
  if (!(eta > 0.0)) throw VolumeLiftError("lift requires eta > 0");
  const double slack = eta * eta - l2_norm_squared(rt.function()) / kTwoPi;
  if (!(slack > 0.0)) {
    throw VolumeLiftError("zero-mean part too large for volume of cylinder eta = " + std::to_string(eta));
  }
  return std::sqrt(slack);
}

/// psi*(rt, eta): the unique profile with P0 = rt and F = F(eta) on the
/// admissible set. The k = 0 coefficient is set directly, so P0(lift) == rt
/// holds exactly.
inline ProfileFunction lift(const ZeroMeanFunction& rt, double eta) {
  const double c = lift_constant(rt, eta);
  std::vector<Complex> coeffs(rt.coefficients().begin(), rt.coefficients().end());
  coeffs[0] = Complex(c, 0.0);
  auto r = ProfileFunction::from_coefficients(std::move(coeffs));
  if (!(r.min() > 0.0)) {
    throw PositivityError("lifted profile is not positive (min r = " + std::to_string(r.min()) + ")");
  }
  return r;
}

/// D1 psi*(0, eta) h = h.
inline ZeroMeanFunction lift_derivative_at_zero(const ZeroMeanFunction& h, double eta) {
  if (!(eta > 0.0)) throw VolumeLiftError("lift requires eta > 0");
  return h;
}

/// Closed-form D1 psi*(rt, eta) h = h - (int rt h) / (2pi c).
inline ProfileFunction lift_derivative(const ZeroMeanFunction& rt, const ZeroMeanFunction& h, double eta) {
  const double c = lift_constant(rt, eta);
  std::vector<double> prod(rt.size());
  for (int j = 0; j < rt.size(); ++j) prod[j] = rt[j] * h[j];
  const double shift = -integrate(ProfileFunction::from_values(std::move(prod))) / (kTwoPi * c);
  return h.function() + shift;
}

/// Central difference (lift(rt + e h) - lift(rt - e h)) / 2e.
inline ProfileFunction lift_difference_quotient(const ZeroMeanFunction& rt, const ZeroMeanFunction& h,
                                                double eta, double eps) {
  const auto plus = project_zero_mean(linear_combination(1.0, rt.function(), eps, h.function()));
  const auto minus = project_zero_mean(linear_combination(1.0, rt.function(), -eps, h.function()));
  return (0.5 / eps) * (lift(plus, eta) - lift(minus, eta));
}

/// Reduced operator P0 G(psi*(rt, eta)).
inline ZeroMeanFunction reduced_rhs(const ZeroMeanFunction& rt, double eta) {
  return project_zero_mean(amcf_rhs(lift(rt, eta)));
}

}  // namespace amcf
