#pragma once

// Periodic scalar fields on the torus T = [-pi, pi) sampled on a uniform grid
// x_j = -pi + 2 pi j / n, paired with their Fourier-series coefficients
//
//   u(x) = sum_k c_k e^{ikx},   c_k = (1/n) sum_j u_j e^{-ik x_j}.
//
// Coefficients are stored in FFT order (slot j holds k = j for j <= n/2 and
// k = j - n otherwise). The Nyquist slot k = n/2 is stored once and is real.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amcf/errors.hpp"

namespace amcf {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kDefaultGridSize = 256;

inline void check_grid_size(int n) {
  if (n < 8 || n % 2 != 0) {
    throw InvalidGridError("grid size must be even and >= 8, got " + std::to_string(n));
  }
}

/// Grid point x_j on [-pi, pi).
inline double grid_point(int n, int j) { return -kPi + kTwoPi * j / n; }

/// Signed wavenumber stored in FFT slot j.
inline int wavenumber(int n, int slot) { return slot <= n / 2 ? slot : slot - n; }

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// (-1)^k phase from the grid starting at -pi rather than 0.
inline double grid_phase(int slot) { return (slot % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

/// Forward transform: grid samples to Fourier-series coefficients.
inline std::vector<Complex> to_spectral(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  check_grid_size(n);
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(n);
  detail::fft_engine().fwd(out, in);
  const double scale = 1.0 / n;
  for (int j = 0; j < n; ++j) out[j] *= detail::grid_phase(j) * scale;
  // Real input: the k = 0 and Nyquist coefficients are real.
  out[0] = Complex(out[0].real(), 0.0);
  out[n / 2] = Complex(out[n / 2].real(), 0.0);
  for (int j = 1; j < n / 2; ++j) {
    const Complex avg = 0.5 * (out[j] + std::conj(out[n - j]));
    out[j] = avg;
    out[n - j] = std::conj(avg);
  }
  return out;
}

/// Inverse transform: coefficients (FFT order) to grid samples. Imaginary
/// residue is discarded; coefficients are expected to be conjugate-symmetric.
inline std::vector<double> to_physical(std::span<const Complex> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  check_grid_size(n);
  std::vector<Complex> in(n);
  for (int j = 0; j < n; ++j) in[j] = coeffs[j] * detail::grid_phase(j);
  std::vector<Complex> out(n);
  detail::fft_engine().inv(out, in);  // includes the 1/n factor
  std::vector<double> values(n);
  for (int j = 0; j < n; ++j) values[j] = out[j].real() * n;
  return values;
}

class ZeroMeanFunction;

/// Uniform-grid periodic real function with synchronized spectral pair.
class ProfileFunction {
 public:
  ProfileFunction() = default;

  static ProfileFunction from_values(std::vector<double> values) {
    ProfileFunction u;
    u.coeffs_ = to_spectral(values);
    u.values_ = std::move(values);
    return u;
  }

  /// Enforces conjugate symmetry, then synthesizes the samples.
  static ProfileFunction from_coefficients(std::vector<Complex> coeffs) {
    const int n = static_cast<int>(coeffs.size());
    check_grid_size(n);
    coeffs[0] = Complex(coeffs[0].real(), 0.0);
    coeffs[n / 2] = Complex(coeffs[n / 2].real(), 0.0);
    for (int j = 1; j < n / 2; ++j) {
      const Complex avg = 0.5 * (coeffs[j] + std::conj(coeffs[n - j]));
      coeffs[j] = avg;
      coeffs[n - j] = std::conj(avg);
    }
    ProfileFunction u;
    u.values_ = to_physical(coeffs);
    u.coeffs_ = std::move(coeffs);
    return u;
  }

  template <class F>
  static ProfileFunction sample(int n, F&& f) {
    check_grid_size(n);
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = f(grid_point(n, j));
    return from_values(std::move(v));
  }

  static ProfileFunction constant(int n, double c) {
    check_grid_size(n);
    return from_values(std::vector<double>(n, c));
  }

  int size() const { return static_cast<int>(values_.size()); }
  double x(int j) const { return grid_point(size(), j); }
  double operator[](int j) const { return values_[j]; }
  std::span<const double> values() const { return values_; }
  std::span<const Complex> coefficients() const { return coeffs_; }

  /// Coefficient c_k for |k| <= n/2 (k = -n/2 aliases the Nyquist slot).
  Complex coefficient(int k) const {
    const int n = size();
    if (k > n / 2 || k < -n / 2) {
      throw PreconditionError("wavenumber " + std::to_string(k) + " not resolved on grid " +
                              std::to_string(n));
    }
    return coeffs_[(k + n) % n];
  }

  /// Q0: the mean value (1/2pi) * integral.
  double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }

  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
};

/// Profile with an identically zero k = 0 coefficient (image of P0).
class ZeroMeanFunction {
 public:
  ZeroMeanFunction() = default;

  static ZeroMeanFunction from_coefficients(std::vector<Complex> coeffs) {
    if (!coeffs.empty()) coeffs[0] = Complex(0.0, 0.0);
    return ZeroMeanFunction(ProfileFunction::from_coefficients(std::move(coeffs)));
  }

  static ZeroMeanFunction zero(int n) {
    return from_coefficients(std::vector<Complex>(n, Complex(0.0, 0.0)));
  }

  const ProfileFunction& function() const { return u_; }
  int size() const { return u_.size(); }
  double operator[](int j) const { return u_[j]; }
  std::span<const double> values() const { return u_.values(); }
  std::span<const Complex> coefficients() const { return u_.coefficients(); }
  Complex coefficient(int k) const { return u_.coefficient(k); }

 private:
  explicit ZeroMeanFunction(ProfileFunction u) : u_(std::move(u)) {}
  ProfileFunction u_;
};

// ---------------------------------------------------------------------------
// Pointwise and linear helpers

template <class F>
ProfileFunction map_values(const ProfileFunction& u, F&& f) {
  std::vector<double> v(u.size());
  for (int j = 0; j < u.size(); ++j) v[j] = f(u[j]);
  return ProfileFunction::from_values(std::move(v));
}

inline ProfileFunction linear_combination(double a, const ProfileFunction& u, double b,
                                          const ProfileFunction& w) {
  if (u.size() != w.size()) throw PreconditionError("grid size mismatch");
  std::vector<double> v(u.size());
  for (int j = 0; j < u.size(); ++j) v[j] = a * u[j] + b * w[j];
  return ProfileFunction::from_values(std::move(v));
}

inline ProfileFunction operator+(const ProfileFunction& u, const ProfileFunction& w) {
  return linear_combination(1.0, u, 1.0, w);
}
inline ProfileFunction operator-(const ProfileFunction& u, const ProfileFunction& w) {
  return linear_combination(1.0, u, -1.0, w);
}
inline ProfileFunction operator*(double a, const ProfileFunction& u) {
  return map_values(u, [a](double v) { return a * v; });
}
inline ProfileFunction operator+(const ProfileFunction& u, double c) {
  return map_values(u, [c](double v) { return v + c; });
}

inline double sup_distance(const ProfileFunction& u, const ProfileFunction& w) {
  if (u.size() != w.size()) throw PreconditionError("grid size mismatch");
  double m = 0.0;
  for (int j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u[j] - w[j]));
  return m;
}

// ---------------------------------------------------------------------------
// Spectral calculus

/// Spectral derivative of order 1 or 2. Odd orders zero the Nyquist mode.
inline ProfileFunction derivative(const ProfileFunction& u, int order) {
  if (order != 1 && order != 2) {
    throw PreconditionError("derivative order must be 1 or 2, got " + std::to_string(order));
  }
  const int n = u.size();
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  for (int j = 0; j < n; ++j) {
    const double k = wavenumber(n, j);
    if (order == 1) {
      c[j] *= Complex(0.0, k);
    } else {
      c[j] *= -k * k;
    }
  }
  if (order == 1) c[n / 2] = 0.0;
  return ProfileFunction::from_coefficients(std::move(c));
}

/// Integral over one period (trapezoid rule, spectrally exact when resolved).
inline double integrate(const ProfileFunction& u) { return kTwoPi * u.mean(); }

/// P0 u = u - (1/2pi) int u, acting on the stored coefficients.
inline ZeroMeanFunction project_zero_mean(const ProfileFunction& u) {
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  return ZeroMeanFunction::from_coefficients(std::move(c));
}

/// Q0 u = (1/2pi) int u.
inline double project_mean(const ProfileFunction& u) { return u.mean(); }

/// 2/3-rule truncation: zero every |k| > n/3.
inline ProfileFunction dealias(const ProfileFunction& u) {
  const int n = u.size();
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  const int cutoff = n / 3;
  for (int j = 0; j < n; ++j) {
    if (std::abs(wavenumber(n, j)) > cutoff) c[j] = 0.0;
  }
  return ProfileFunction::from_coefficients(std::move(c));
}

/// Trigonometric interpolant evaluated at an arbitrary x.
inline double evaluate(const ProfileFunction& u, double x) {
  const int n = u.size();
  double s = u.mean();
  for (int k = 1; k < n / 2; ++k) {
    s += 2.0 * (u.coefficient(k) * std::polar(1.0, k * x)).real();
  }
  s += u.coefficient(n / 2).real() * std::cos(0.5 * n * x);
  return s;
}

/// u(x - a), applied as a phase shift on the coefficients.
inline ProfileFunction translate(const ProfileFunction& u, double a) {
  const int n = u.size();
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  for (int j = 0; j < n; ++j) {
    if (j == n / 2) {
      c[j] *= std::cos(0.5 * n * a);
    } else {
      c[j] *= std::polar(1.0, -wavenumber(n, j) * a);
    }
  }
  return ProfileFunction::from_coefficients(std::move(c));
}

/// Resample on a different grid by zero-padding or truncating coefficients.
inline ProfileFunction resample(const ProfileFunction& u, int n_new) {
  check_grid_size(n_new);
  const int n = u.size();
  std::vector<Complex> c(n_new, Complex(0.0, 0.0));
  const int kmax = std::min(n, n_new) / 2;
  for (int k = -kmax + 1; k < kmax; ++k) c[(k + n_new) % n_new] = u.coefficient(k);
  if (n_new == n) c[n / 2] = u.coefficient(n / 2);
  return ProfileFunction::from_coefficients(std::move(c));
}

// ---------------------------------------------------------------------------
// Real Fourier basis {1, cos x, sin x, cos 2x, sin 2x, ...}

/// Wavenumber of basis element `index` (0 for the constant).
inline int real_basis_wavenumber(int index) { return (index + 1) / 2; }

inline ProfileFunction real_basis_function(int n, int index) {
  const int k = real_basis_wavenumber(index);
  if (index == 0) return ProfileFunction::constant(n, 1.0);
  const bool is_cos = (index % 2 == 1);
  return ProfileFunction::sample(n, [&](double x) { return is_cos ? std::cos(k * x) : std::sin(k * x); });
}

/// Coefficient of `u` along basis element `index` (L2-orthogonal projection).
inline double real_basis_component(const ProfileFunction& u, int index) {
  const int k = real_basis_wavenumber(index);
  if (index == 0) return u.mean();
  const Complex c = u.coefficient(k);
  return (index % 2 == 1) ? 2.0 * c.real() : -2.0 * c.imag();
}

/// Cosine amplitude a_k in u = sum a_k cos(kx) + ...
inline double cosine_coefficient(const ProfileFunction& u, int k) {
  return k == 0 ? u.mean() : 2.0 * u.coefficient(k).real();
}

/// Amplitude 2|c_k| of wavenumber k >= 1.
inline double mode_amplitude(const ProfileFunction& u, int k) { return 2.0 * std::abs(u.coefficient(k)); }

// ---------------------------------------------------------------------------
// Norms and diagnostics

inline double l2_norm_squared(const ProfileFunction& u) {
  return integrate(map_values(u, [](double v) { return v * v; }));
}

/// Grid-pair lower bound on the sigma-Hoelder seminorm, using the torus
/// metric d(x, y) = min(|x - y|, 2pi - |x - y|). Diagnostic only.
inline double holder_seminorm_estimate(const ProfileFunction& u, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw PreconditionError("Hoelder exponent must lie in (0, 1)");
  }
  const int n = u.size();
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(u.x(i) - u.x(j));
      const double dt = std::min(d, kTwoPi - d);
      best = std::max(best, std::abs(u[i] - u[j]) / std::pow(dt, sigma));
    }
  }
  return best;
}

/// Dense matrix of the spectral second derivative on an n-point grid,
/// cached per n. Column j is the second derivative of the j-th cardinal
/// function, so D2 * values == derivative(u, 2).values().
inline const Eigen::MatrixXd& second_derivative_matrix(int n) {
  static std::mutex mutex;
  static std::map<int, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  check_grid_size(n);
  Eigen::MatrixXd d2(n, n);
  std::vector<double> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const auto col = derivative(ProfileFunction::from_values(e), 2);
    for (int i = 0; i < n; ++i) d2(i, j) = col[i];
    e[j] = 0.0;
  }
  return cache.emplace(n, std::move(d2)).first->second;
}

}  // namespace amcf
