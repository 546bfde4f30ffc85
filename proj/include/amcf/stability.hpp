#pragma once

// Linear stability at equilibria: closed-form cylinder spectra and dense
// eigen-solves of the discretized linearizations.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "amcf/errors.hpp"
#include "amcf/geometry.hpp"
#include "amcf/reduction.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

enum class SpectrumBasis { Full, EvenZeroMean };

enum class ReducedParity { Full, Even };

struct SpectrumReport {
  std::string operator_tag;  // "full-DG" or "reduced-even" / "reduced"
  std::string base_point;
  std::vector<Complex> eigenvalues;  // descending by real part
  std::vector<int> mode_labels;      // wavenumber per eigenvalue, empty if not closed form

  Complex leading() const {
    if (eigenvalues.empty()) throw PreconditionError("empty spectrum");
    return eigenvalues.front();
  }
};

namespace detail {

inline bool descending(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Sorts eigenvalues (and labels, when present) descending by real part.
inline void sort_report(SpectrumReport& rep) {
  std::vector<std::size_t> order(rep.eigenvalues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return descending(rep.eigenvalues[i], rep.eigenvalues[j]);
  });
  std::vector<Complex> ev;
  std::vector<int> labels;
  for (std::size_t i : order) {
    ev.push_back(rep.eigenvalues[i]);
    if (!rep.mode_labels.empty()) labels.push_back(rep.mode_labels[i]);
  }
  rep.eigenvalues = std::move(ev);
  rep.mode_labels = std::move(labels);
}

inline std::string cylinder_label(const char* name, double radius) {
  return std::string("cylinder ") + name + "=" + std::to_string(radius);
}

inline SpectrumReport eigen_report(const Eigen::MatrixXd& m, std::string tag, std::string base) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  SpectrumReport rep{std::move(tag), std::move(base), {}, {}};
  for (int i = 0; i < solver.eigenvalues().size(); ++i) rep.eigenvalues.push_back(solver.eigenvalues()[i]);
  sort_report(rep);
  return rep;
}

}  // namespace detail

/// {0} together with r*^{-2} - k^2 for 1 <= k <= k_max, each twice (cos, sin).
inline SpectrumReport cylinder_spectrum(double r_star, int k_max) {
  if (!(r_star > 0.0)) throw DomainError("cylinder radius must be positive");
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  SpectrumReport rep{"full-DG", detail::cylinder_label("r_star", r_star), {Complex(0.0, 0.0)}, {0}};
  const double inv2 = 1.0 / (r_star * r_star);
  for (int k = 1; k <= k_max; ++k) {
    for (int copy = 0; copy < 2; ++copy) {
      rep.eigenvalues.emplace_back(inv2 - double(k) * k, 0.0);
      rep.mode_labels.push_back(k);
    }
  }
  detail::sort_report(rep);
  return rep;
}

/// eta^{-2} - k^2 for 1 <= k <= k_max; no zero eigenvalue. With the even
/// parity each wavenumber appears once (cos modes only).
inline SpectrumReport reduced_cylinder_spectrum(double eta, int k_max, ReducedParity parity = ReducedParity::Full) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  SpectrumReport rep{parity == ReducedParity::Even ? "reduced-even" : "reduced", detail::cylinder_label("eta", eta),
                     {}, {}};
  const double inv2 = 1.0 / (eta * eta);
  const int copies = parity == ReducedParity::Even ? 1 : 2;
  for (int k = 1; k <= k_max; ++k) {
    for (int copy = 0; copy < copies; ++copy) {
      rep.eigenvalues.emplace_back(inv2 - double(k) * k, 0.0);
      rep.mode_labels.push_back(k);
    }
  }
  detail::sort_report(rep);
  return rep;
}

/// Matrix of the reduced linearization D1 calG(P0 r, eta) on the cosine
/// basis {cos kx : 1 <= k <= m}, with eta the equivolume radius of r. Entry
/// (i, j) is the cos((i+1)x) coefficient of the central difference in
/// direction cos((j+1)x).
inline Eigen::MatrixXd reduced_even_matrix(const ProfileFunction& r, int m) {
  require_positive(r, "reduced_even_matrix");
  const int n = r.size();
  if (m < 1 || 3 * m > n) {
    throw PreconditionError("even basis size must lie in [1, n/3] (got " + std::to_string(m) + ")");
  }
  const double eta = equivolume_radius(r);
  const auto rt = project_zero_mean(r);
  const double eps = linearization_step(r);
  Eigen::MatrixXd a(m, m);
  for (int j = 0; j < m; ++j) {
    const auto dir = ProfileFunction::sample(n, [&](double x) { return std::cos((j + 1) * x); });
    const auto plus = reduced_rhs(project_zero_mean(linear_combination(1.0, rt.function(), eps, dir)), eta);
    const auto minus = reduced_rhs(project_zero_mean(linear_combination(1.0, rt.function(), -eps, dir)), eta);
    const auto d = (0.5 / eps) * (plus.function() - minus.function());
    for (int i = 0; i < m; ++i) a(i, j) = cosine_coefficient(d, i + 1);
  }
  return a;
}

/// Dense eigen-solve of the discretized linearization at an equilibrium.
/// Full: DG(r) over the first m real Fourier basis elements. EvenZeroMean:
/// the reduced operator over cos x, ..., cos mx.
inline SpectrumReport numeric_spectrum(const ProfileFunction& r, SpectrumBasis basis, int m,
                                       double equilibrium_tol = 1e-6) {
  const double residual = amcf_rhs(r).sup_norm();
  if (!(residual < equilibrium_tol)) {
    throw PreconditionError("base point is not an equilibrium (sup |G| = " + std::to_string(residual) + ")");
  }
  const std::string base = "profile n=" + std::to_string(r.size()) + " mean=" + std::to_string(r.mean()) +
                           " amplitude=" + std::to_string(r.max() - r.min());
  if (basis == SpectrumBasis::Full) return detail::eigen_report(linearization_matrix(r, m), "full-DG", base);
  return detail::eigen_report(reduced_even_matrix(r, m), "reduced-even", base);
}

enum class StabilityClass { Stable, Critical, Unstable };

inline std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Critical: return "critical";
    case StabilityClass::Unstable: return "unstable";
  }
  return "unknown";
}

/// Slowest nonzero cylinder mode, r*^{-2} - 1.
inline double decay_rate_prediction(double r_star) {
  if (!(r_star > 0.0)) throw DomainError("cylinder radius must be positive");
  return 1.0 / (r_star * r_star) - 1.0;
}

inline StabilityClass classify(double r_star) {
  if (!(r_star > 0.0)) throw DomainError("cylinder radius must be positive");
  if (r_star > 1.0) return StabilityClass::Stable;
  if (r_star < 1.0) return StabilityClass::Unstable;
  return StabilityClass::Critical;
}

}  // namespace amcf
