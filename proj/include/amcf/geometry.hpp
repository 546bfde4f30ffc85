#pragma once

// Geometric functionals of an axisymmetric profile r(x) > 0 and the
// averaged mean curvature flow operator
//
//   G(r) = sqrt(1 + r_x^2) [h(r) - H(r)].

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "amcf/errors.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

struct CurvaturePair {
  ProfileFunction kappa1;  // azimuthal, 1 / (r sqrt(1 + r_x^2))
  ProfileFunction kappa2;  // axial, -r_xx / (1 + r_x^2)^{3/2}
};

struct GeometrySummary {
  double area = 0.0;    // S(r), one period, without the 2pi factor
  double volume = 0.0;  // F(r) = int r^2
  double h_avg = 0.0;   // area-weighted average of H
  double g_norm = 0.0;  // sup |G(r)|
  double min_r = 0.0;
};

inline void require_positive(const ProfileFunction& r, const char* what) {
  const double m = r.min();
  if (!(m > 0.0)) {
    throw DomainError(std::string(what) + ": profile must be positive (min r = " + std::to_string(m) + ")");
  }
}

namespace detail {

// Samples shared by every functional: r, r_x, r_xx, w = sqrt(1 + r_x^2).
struct ProfileJet {
  std::vector<double> r, rx, rxx, w;

  explicit ProfileJet(const ProfileFunction& u) {
    const auto d1 = derivative(u, 1);
    const auto d2 = derivative(u, 2);
    const int n = u.size();
    r.assign(u.values().begin(), u.values().end());
    rx.assign(d1.values().begin(), d1.values().end());
    rxx.assign(d2.values().begin(), d2.values().end());
    w.resize(n);
    for (int j = 0; j < n; ++j) w[j] = std::sqrt(1.0 + rx[j] * rx[j]);
  }

  int size() const { return static_cast<int>(r.size()); }
};

// Trapezoid rule on the uniform grid.
inline double grid_integral(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return kTwoPi * s / static_cast<double>(v.size());
}

inline std::vector<double> mean_curvature_samples(const ProfileJet& jet) {
  std::vector<double> H(jet.size());
  for (int j = 0; j < jet.size(); ++j) {
    const double w = jet.w[j];
    H[j] = 1.0 / (jet.r[j] * w) - jet.rxx[j] / (w * w * w);
  }
  return H;
}

}  // namespace detail

inline CurvaturePair principal_curvatures(const ProfileFunction& r) {
  require_positive(r, "principal_curvatures");
  const detail::ProfileJet jet(r);
  std::vector<double> k1(jet.size()), k2(jet.size());
  for (int j = 0; j < jet.size(); ++j) {
    const double w = jet.w[j];
    k1[j] = 1.0 / (jet.r[j] * w);
    k2[j] = -jet.rxx[j] / (w * w * w);
  }
  return {ProfileFunction::from_values(std::move(k1)), ProfileFunction::from_values(std::move(k2))};
}

/// H = kappa1 + kappa2.
inline ProfileFunction mean_curvature(const ProfileFunction& r) {
  require_positive(r, "mean_curvature");
  return ProfileFunction::from_values(detail::mean_curvature_samples(detail::ProfileJet(r)));
}

/// S(r) = int r sqrt(1 + r_x^2) dx.
inline double surface_area(const ProfileFunction& r) {
  require_positive(r, "surface_area");
  const detail::ProfileJet jet(r);
  std::vector<double> dens(jet.size());
  for (int j = 0; j < jet.size(); ++j) dens[j] = jet.r[j] * jet.w[j];
  return detail::grid_integral(dens);
}

/// F(r) = int r^2 dx.
inline double enclosed_volume(const ProfileFunction& r) { return l2_norm_squared(r); }

/// h(r) = (1/S) int H r sqrt(1 + r_x^2) dx.
inline double averaged_curvature(const ProfileFunction& r) {
  require_positive(r, "averaged_curvature");
  const detail::ProfileJet jet(r);
  const auto H = detail::mean_curvature_samples(jet);
  std::vector<double> dens(jet.size()), weighted(jet.size());
  for (int j = 0; j < jet.size(); ++j) {
    dens[j] = jet.r[j] * jet.w[j];
    weighted[j] = H[j] * dens[j];
  }
  return detail::grid_integral(weighted) / detail::grid_integral(dens);
}

/// G(r) = sqrt(1 + r_x^2)(h(r) - H(r)), assembled pointwise then truncated
/// with the 2/3 rule.
inline ProfileFunction amcf_rhs(const ProfileFunction& r) {
  require_positive(r, "amcf_rhs");
  const detail::ProfileJet jet(r);
  const auto H = detail::mean_curvature_samples(jet);
  const int n = jet.size();
  std::vector<double> dens(n), weighted(n);
  for (int j = 0; j < n; ++j) {
    dens[j] = jet.r[j] * jet.w[j];
    weighted[j] = H[j] * dens[j];
  }
  const double h = detail::grid_integral(weighted) / detail::grid_integral(dens);
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = jet.w[j] * (h - H[j]);
  return dealias(ProfileFunction::from_values(std::move(g)));
}

inline GeometrySummary summarize(const ProfileFunction& r) {
  GeometrySummary s;
  s.area = surface_area(r);
  s.volume = enclosed_volume(r);
  s.h_avg = averaged_curvature(r);
  s.g_norm = amcf_rhs(r).sup_norm();
  s.min_r = r.min();
  return s;
}

/// int (h - H)^2 r sqrt(1 + r_x^2) dx, the rate at which the flow removes area.
inline double area_dissipation(const ProfileFunction& r) {
  require_positive(r, "area_dissipation");
  const detail::ProfileJet jet(r);
  const auto H = detail::mean_curvature_samples(jet);
  const double h = averaged_curvature(r);
  std::vector<double> v(jet.size());
  for (int j = 0; j < jet.size(); ++j) v[j] = (h - H[j]) * (h - H[j]) * jet.r[j] * jet.w[j];
  return detail::grid_integral(v);
}

/// Directional derivative DS(r)[rho] = int (rho w + r r_x rho_x / w) dx.
inline double area_directional_derivative(const ProfileFunction& r, const ProfileFunction& rho) {
  require_positive(r, "area_directional_derivative");
  const detail::ProfileJet jet(r);
  const auto rho_x = derivative(rho, 1);
  std::vector<double> v(jet.size());
  for (int j = 0; j < jet.size(); ++j) {
    v[j] = rho[j] * jet.w[j] + jet.r[j] * jet.rx[j] * rho_x[j] / jet.w[j];
  }
  return detail::grid_integral(v);
}

// ---------------------------------------------------------------------------
// Quasilinear split G(r) = -A(r) r + f(r)

/// A(r) rho = [sqrt(1 + r_x^2) / S(r)] int r rho_xx / (1 + r_x^2) dx - rho_xx / (1 + r_x^2).
inline ProfileFunction quasilinear_apply_A(const ProfileFunction& r, const ProfileFunction& rho) {
  require_positive(r, "quasilinear_apply_A");
  const detail::ProfileJet jet(r);
  const auto rho_xx = derivative(rho, 2);
  const int n = jet.size();
  std::vector<double> dens(n), nonlocal(n);
  for (int j = 0; j < n; ++j) {
    dens[j] = jet.r[j] * jet.w[j];
    nonlocal[j] = jet.r[j] * rho_xx[j] / (jet.w[j] * jet.w[j]);
  }
  const double S = detail::grid_integral(dens);
  const double I = detail::grid_integral(nonlocal);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double w2 = jet.w[j] * jet.w[j];
    out[j] = jet.w[j] / S * I - rho_xx[j] / w2;
  }
  return ProfileFunction::from_values(std::move(out));
}

/// f(r) = 2pi sqrt(1 + r_x^2) / S(r) - 1/r.
inline ProfileFunction quasilinear_f(const ProfileFunction& r) {
  require_positive(r, "quasilinear_f");
  const detail::ProfileJet jet(r);
  const int n = jet.size();
  std::vector<double> dens(n);
  for (int j = 0; j < n; ++j) dens[j] = jet.r[j] * jet.w[j];
  const double S = detail::grid_integral(dens);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = kTwoPi * jet.w[j] / S - 1.0 / jet.r[j];
  return ProfileFunction::from_values(std::move(out));
}

/// Dense n x n matrix of rho -> A(r) rho on grid values. Column j equals
/// quasilinear_apply_A(r, e_j); assembled from the cached D2 matrix.
inline Eigen::MatrixXd quasilinear_matrix(const ProfileFunction& r) {
  require_positive(r, "quasilinear_matrix");
  const detail::ProfileJet jet(r);
  const int n = jet.size();
  const Eigen::MatrixXd& d2 = second_derivative_matrix(n);
  Eigen::VectorXd w(n), inv_w2(n), dens(n), quad_row(n);
  for (int j = 0; j < n; ++j) {
    w[j] = jet.w[j];
    inv_w2[j] = 1.0 / (jet.w[j] * jet.w[j]);
    dens[j] = jet.r[j] * jet.w[j];
    quad_row[j] = kTwoPi / n * jet.r[j] * inv_w2[j];
  }
  const double S = kTwoPi * dens.mean();
  Eigen::MatrixXd a = (w / S) * (quad_row.transpose() * d2);
  a.noalias() -= inv_w2.asDiagonal() * d2;
  return a;
}

// ---------------------------------------------------------------------------
// Linearization

/// Central-difference step used for directional derivatives of G.
inline double linearization_step(const ProfileFunction& r) { return 1e-6 * (1.0 + r.sup_norm()); }

/// DG(r)[rho] by central differences (G(r + e rho) - G(r - e rho)) / 2e.
inline ProfileFunction directional_derivative_G(const ProfileFunction& r, const ProfileFunction& rho,
                                                double eps) {
  if (!(eps > 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + r.sup_norm()))) {
    throw NumericalError("finite-difference step underflows relative to the profile scale");
  }
  const auto gp = amcf_rhs(linear_combination(1.0, r, eps, rho));
  const auto gm = amcf_rhs(linear_combination(1.0, r, -eps, rho));
  return (0.5 / eps) * (gp - gm);
}

/// Matrix of DG(r) in the real Fourier basis {1, cos x, sin x, cos 2x, ...}
/// truncated to `basis_size` elements. Entry (i, j) is the i-th basis
/// component of DG(r)[e_j]; columns are independent.
inline Eigen::MatrixXd linearization_matrix(const ProfileFunction& r, int basis_size) {
  require_positive(r, "linearization_matrix");
  const int n = r.size();
  if (basis_size < 1 || 3 * basis_size > 2 * n) {
    throw PreconditionError("basis_size must lie in [1, 2n/3] (got " + std::to_string(basis_size) +
                            " for n = " + std::to_string(n) + ")");
  }
  const double eps = linearization_step(r);
  Eigen::MatrixXd m(basis_size, basis_size);
  for (int col = 0; col < basis_size; ++col) {
    const auto dg = directional_derivative_G(r, real_basis_function(n, col), eps);
    for (int row = 0; row < basis_size; ++row) m(row, col) = real_basis_component(dg, row);
  }
  return m;
}

}  // namespace amcf
