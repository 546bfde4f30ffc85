#pragma once

// Reference implementations used only for verification. None of them shares
// code with the spectral path: derivatives come from analytic formulas or
// periodic finite differences, integrals from adaptive quadrature, Fourier
// coefficients from a direct O(n^2) sum.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "amcf/torus_field.hpp"

namespace amcf::oracle {

/// Trigonometric polynomial mean + sum a_k cos kx + b_k sin kx with analytic
/// derivatives.
struct TrigProfile {
  double mean = 1.0;
  std::vector<double> a;  // a[k-1] multiplies cos kx
  std::vector<double> b;  // b[k-1] multiplies sin kx

  double value(double x) const { return eval(x, 0); }
  double d1(double x) const { return eval(x, 1); }
  double d2(double x) const { return eval(x, 2); }

  ProfileFunction sample(int n) const {
    return ProfileFunction::sample(n, [this](double x) { return value(x); });
  }

 private:
  double eval(double x, int order) const {
    double s = order == 0 ? mean : 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      const double k = double(i + 1);
      const double ca = i < a.size() ? a[i] : 0.0, cb = i < b.size() ? b[i] : 0.0;
      const double c = std::cos(k * x), sn = std::sin(k * x);
      switch (order) {
        case 0: s += ca * c + cb * sn; break;
        case 1: s += k * (-ca * sn + cb * c); break;
        default: s += -k * k * (ca * c + cb * sn); break;
      }
    }
    return s;
  }
};

/// Random smooth positive profile: mean 1, `modes` harmonics with amplitudes
/// decaying like 0.15 / k^2.
inline TrigProfile random_profile(std::mt19937_64& rng, int modes = 6) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigProfile p;
  p.mean = 1.0 + 0.2 * u(rng);
  for (int k = 1; k <= modes; ++k) {
    p.a.push_back(0.15 * u(rng) / (k * k));
    p.b.push_back(0.15 * u(rng) / (k * k));
  }
  return p;
}

template <class F>
double quad(F&& f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -kPi, kPi, 25, 1e-15);
}

inline double mean_curvature_at(const TrigProfile& p, double x) {
  const double r = p.value(x), rx = p.d1(x), rxx = p.d2(x);
  const double w = std::sqrt(1.0 + rx * rx);
  return 1.0 / (r * w) - rxx / (w * w * w);
}

inline double area(const TrigProfile& p) {
  return quad([&](double x) {
    const double rx = p.d1(x);
    return p.value(x) * std::sqrt(1.0 + rx * rx);
  });
}

inline double volume(const TrigProfile& p) {
  return quad([&](double x) { return p.value(x) * p.value(x); });
}

inline double averaged_curvature(const TrigProfile& p) {
  const double num = quad([&](double x) {
    const double rx = p.d1(x);
    return mean_curvature_at(p, x) * p.value(x) * std::sqrt(1.0 + rx * rx);
  });
  return num / area(p);
}

/// c_k = (1/n) sum_j u_j e^{-i k x_j} evaluated directly.
inline std::vector<Complex> direct_dft(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size());
  std::vector<Complex> c(n);
  for (int slot = 0; slot < n; ++slot) {
    const int k = wavenumber(n, slot);
    Complex s(0.0, 0.0);
    for (int j = 0; j < n; ++j) s += u[j] * std::polar(1.0, -k * grid_point(n, j));
    c[slot] = s / double(n);
  }
  return c;
}

/// Eighth-order central finite differences on the periodic grid.
inline std::vector<double> fd8_derivative(const std::vector<double>& u, int order) {
  static constexpr std::array<double, 4> d1{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  static constexpr std::array<double, 4> d2{8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  static constexpr double d2_center = -205.0 / 72.0;
  const int n = static_cast<int>(u.size());
  const double h = kTwoPi / n;
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    double s = order == 2 ? d2_center * u[j] : 0.0;
    for (int m = 1; m <= 4; ++m) {
      const double up = u[(j + m) % n], dn = u[(j - m + n) % n];
      s += order == 1 ? d1[m - 1] * (up - dn) : d2[m - 1] * (up + dn);
    }
    out[j] = order == 1 ? s / h : s / (h * h);
  }
  return out;
}

/// G(r) assembled from finite-difference derivatives and the trapezoid rule,
/// without dealiasing.
inline std::vector<double> fd_amcf_rhs(const std::vector<double>& r) {
  const int n = static_cast<int>(r.size());
  const auto rx = fd8_derivative(r, 1), rxx = fd8_derivative(r, 2);
  std::vector<double> w(n), H(n);
  double area_sum = 0.0, weighted = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = std::sqrt(1.0 + rx[j] * rx[j]);
    H[j] = 1.0 / (r[j] * w[j]) - rxx[j] / (w[j] * w[j] * w[j]);
    area_sum += r[j] * w[j];
    weighted += H[j] * r[j] * w[j];
  }
  const double h = weighted / area_sum;
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = w[j] * (h - H[j]);
  return g;
}

/// Cosine coefficient of wavenumber k >= 1 by direct summation.
inline double cosine_component(const std::vector<double>& u, int k) {
  const int n = static_cast<int>(u.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += u[j] * std::cos(k * grid_point(n, j));
  return 2.0 * s / n;
}

/// Reduced even operator at r = c + a cos(ell x), c fixed by the volume of
/// the cylinder 1/lambda, evaluated with fd_amcf_rhs; returns the cos(q x)
/// coefficient of the result.
inline double fd_reduced_even_component(double a, int ell, double lambda, int q, int n = 512) {
  const double c = std::sqrt(1.0 / (lambda * lambda) - 0.5 * a * a);
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) r[j] = c + a * std::cos(ell * grid_point(n, j));
  return cosine_component(fd_amcf_rhs(r), q);
}

}  // namespace amcf::oracle
