#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "amcf/equilibria.hpp"
#include "amcf/geometry.hpp"
#include "amcf/oracles.hpp"

using namespace amcf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ProfileFunction cosine_profile(int n, double mean, double amp, int k) {
  return ProfileFunction::sample(n, [=](double x) { return mean + amp * std::cos(k * x); });
}

}  // namespace

TEST_CASE("curvatures of a cylinder", "[geometry]") {
  const auto c = principal_curvatures(ProfileFunction::constant(64, 2.0));
  for (int j = 0; j < 64; ++j) {
    CHECK_THAT(c.kappa1[j], WithinAbs(0.5, 1e-15));
    CHECK_THAT(c.kappa2[j], WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("curvatures match eighth-order finite differences", "[geometry]") {
  const auto r = cosine_profile(512, 1.0, 0.1, 1);
  const std::vector<double> v(r.values().begin(), r.values().end());
  const auto rx = oracle::fd8_derivative(v, 1), rxx = oracle::fd8_derivative(v, 2);
  const auto c = principal_curvatures(r);
  for (int j = 0; j < 512; ++j) {
    const double w = std::sqrt(1.0 + rx[j] * rx[j]);
    CHECK_THAT(c.kappa1[j], WithinAbs(1.0 / (v[j] * w), 1e-8));
    CHECK_THAT(c.kappa2[j], WithinAbs(-rxx[j] / (w * w * w), 1e-8));
    CHECK(c.kappa1[j] > 0.0);
  }
}

TEST_CASE("curvatures are translation equivariant", "[geometry]") {
  const int n = 128;
  const auto r = ProfileFunction::sample(n, [](double x) { return 1.0 + 0.2 * std::cos(x) + 0.05 * std::sin(3.0 * x); });
  const double a = 5 * kTwoPi / n;
  const auto lhs = principal_curvatures(translate(r, a));
  const auto rhs = principal_curvatures(r);
  CHECK(sup_distance(lhs.kappa1, translate(rhs.kappa1, a)) < 1e-12);
  CHECK(sup_distance(lhs.kappa2, translate(rhs.kappa2, a)) < 1e-12);
}

TEST_CASE("mean curvature", "[geometry]") {
  const auto H = mean_curvature(ProfileFunction::constant(32, 0.8));
  for (int j = 0; j < 32; ++j) CHECK_THAT(H[j], WithinAbs(1.25, 1e-14));

  const auto u = unduloid_profile(0.3, 1, 256);
  const double Hk = h_for(0.3, 1);
  const auto Hu = mean_curvature(u);
  for (int j = 0; j < 256; ++j) CHECK_THAT(Hu[j], WithinRel(Hk, 1e-6));
}

TEST_CASE("linearized mean curvature at the unit cylinder is -(rho + rho_xx)", "[geometry]") {
  const double eps = 1e-6;
  const auto H = mean_curvature(cosine_profile(64, 1.0, eps, 2));
  for (int j = 0; j < 64; ++j) {
    const double x = H.x(j);
    // -(cos 2x - 4 cos 2x) = 3 cos 2x
    CHECK_THAT((H[j] - 1.0) / eps, WithinAbs(3.0 * std::cos(2.0 * x), 1e-5));
  }
}

TEST_CASE("area and volume", "[geometry]") {
  const auto c = ProfileFunction::constant(64, 1.7);
  CHECK_THAT(surface_area(c), WithinRel(kTwoPi * 1.7, 1e-14));
  CHECK_THAT(enclosed_volume(c), WithinRel(kTwoPi * 1.7 * 1.7, 1e-14));
  const auto one = ProfileFunction::constant(64, 1.0);
  CHECK_THAT(surface_area(one), WithinRel(kTwoPi, 1e-14));
  CHECK_THAT(enclosed_volume(one), WithinRel(kTwoPi, 1e-14));

  const oracle::TrigProfile p{1.0, {0.5}, {}};
  CHECK_THAT(surface_area(p.sample(256)), WithinAbs(oracle::area(p), 1e-10));
  CHECK_THAT(enclosed_volume(p.sample(256)), WithinAbs(oracle::volume(p), 1e-12));
}

TEST_CASE("averaged curvature", "[geometry]") {
  CHECK_THAT(averaged_curvature(ProfileFunction::constant(32, 4.0)), WithinAbs(0.25, 1e-15));

  const oracle::TrigProfile p{1.0, {0.0, 0.3}, {}};
  const auto r = p.sample(256);
  CHECK_THAT(averaged_curvature(r), WithinAbs(oracle::averaged_curvature(p), 1e-9));

  // h S equals the weighted integral of H.
  const auto H = mean_curvature(r);
  const auto rx = derivative(r, 1);
  std::vector<double> w(256);
  for (int j = 0; j < 256; ++j) w[j] = H[j] * r[j] * std::sqrt(1.0 + rx[j] * rx[j]);
  CHECK_THAT(averaged_curvature(r) * surface_area(r),
             WithinRel(integrate(ProfileFunction::from_values(w)), 1e-13));

  CHECK_THAT(averaged_curvature(translate(r, 0.3)), WithinAbs(averaged_curvature(r), 1e-12));
}

TEST_CASE("flow operator basics", "[geometry]") {
  CHECK(amcf_rhs(ProfileFunction::constant(64, 0.6)).sup_norm() < 1e-12);

  const auto r = cosine_profile(256, 1.0, 0.3, 2);
  const auto g = amcf_rhs(r);
  std::vector<double> prod(256);
  for (int j = 0; j < 256; ++j) prod[j] = r[j] * g[j];
  CHECK(std::abs(integrate(ProfileFunction::from_values(prod))) < 1e-10);

  const double eps = 1e-6;
  const auto gl = amcf_rhs(cosine_profile(64, 2.0, eps, 1));
  for (int j = 0; j < 64; ++j) CHECK_THAT(gl[j] / eps, WithinAbs(-0.75 * std::cos(gl.x(j)), 1e-5));
}

TEST_CASE("non-positive profiles are rejected", "[geometry]") {
  const auto bad = cosine_profile(32, 0.5, 1.0, 1);
  CHECK_THROWS_AS(principal_curvatures(bad), DomainError);
  CHECK_THROWS_AS(mean_curvature(bad), DomainError);
  CHECK_THROWS_AS(surface_area(bad), DomainError);
  CHECK_THROWS_AS(averaged_curvature(bad), DomainError);
  CHECK_THROWS_AS(amcf_rhs(bad), DomainError);
  CHECK_THROWS_AS(quasilinear_f(bad), DomainError);
  CHECK_NOTHROW(enclosed_volume(bad));
}

TEST_CASE("volume orthogonality and area dissipation on random profiles", "[geometry]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = oracle::random_profile(rng).sample(256);
    const auto g = amcf_rhs(r);
    std::vector<double> prod(256);
    for (int j = 0; j < 256; ++j) prod[j] = r[j] * g[j];
    CHECK(std::abs(integrate(ProfileFunction::from_values(prod))) < 1e-10);

    const double diss = area_dissipation(r);
    CHECK(diss >= 0.0);
    CHECK_THAT(area_directional_derivative(r, g), WithinRel(-diss, 1e-8));
  }
}

TEST_CASE("quasilinear split", "[geometry]") {
  CHECK(quasilinear_f(ProfileFunction::constant(32, 1.3)).sup_norm() < 1e-15);

  const auto c = ProfileFunction::constant(64, 1.3);
  for (int k : {1, 3, 7}) {
    const auto mode = cosine_profile(64, 0.0, 1.0, k);
    CHECK(sup_distance(quasilinear_apply_A(c, mode), double(k * k) * mode) < 1e-11);
  }

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = oracle::random_profile(rng).sample(256);
    const auto rebuilt = quasilinear_f(r) - quasilinear_apply_A(r, r);
    CHECK(sup_distance(rebuilt, amcf_rhs(r)) < 1e-10);
  }
}

TEST_CASE("quasilinear matrix matches the operator", "[geometry]") {
  const auto r = ProfileFunction::sample(32, [](double x) { return 1.0 + 0.2 * std::cos(x) + 0.1 * std::sin(2.0 * x); });
  const auto A = quasilinear_matrix(r);
  const auto rho = ProfileFunction::sample(32, [](double x) { return std::sin(3.0 * x) + 0.5 * std::cos(x); });
  const Eigen::VectorXd prod = A * Eigen::Map<const Eigen::VectorXd>(rho.values().data(), 32);
  const auto ref = quasilinear_apply_A(r, rho);
  for (int j = 0; j < 32; ++j) CHECK_THAT(prod[j], WithinAbs(ref[j], 1e-10));
}

TEST_CASE("linearization matrix at cylinders", "[geometry]") {
  const auto two = linearization_matrix(ProfileFunction::constant(128, 2.0), 9);
  CHECK_THAT(two(1, 1), WithinAbs(-0.75, 1e-6));
  CHECK_THAT(two(2, 2), WithinAbs(-0.75, 1e-6));
  CHECK_THAT(two(3, 3), WithinAbs(-3.75, 1e-6));
  for (int i = 0; i < 9; ++i) CHECK(std::abs(two(i, 0)) < 1e-6);

  const auto one = linearization_matrix(ProfileFunction::constant(128, 1.0), 5);
  CHECK(std::abs(one(1, 1)) < 1e-6);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(one(i, 0)) < 1e-6);

  // All resolved modes against the multiplier r*^-2 - k^2.
  const auto big = linearization_matrix(ProfileFunction::constant(128, 1.5), 41);
  for (int i = 1; i < 41; ++i) {
    const int k = real_basis_wavenumber(i);
    CHECK_THAT(big(i, i), WithinAbs(1.0 / 2.25 - k * k, 1e-6));
  }
}

TEST_CASE("linearization preconditions", "[geometry]") {
  const auto r = ProfileFunction::constant(32, 1.0);
  CHECK_THROWS_AS(linearization_matrix(r, 0), PreconditionError);
  CHECK_THROWS_AS(linearization_matrix(r, 22), PreconditionError);
  CHECK_THROWS_AS(directional_derivative_G(r, r, 1e-17), NumericalError);
}
