#include <catch_amalgamated.hpp>

#include <cmath>

#include "amcf/bifurcation.hpp"
#include "amcf/oracles.hpp"

using namespace amcf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EvenReducedState state_with(int m, double lambda, int k, double a) {
  EvenReducedState s{std::vector<double>(m, 0.0), lambda};
  s.cos_coeffs[k - 1] = a;
  return s;
}

// Second derivatives of the cos(q x) component of the oracle reduced operator
// at (0, ell), by the same stencils but through finite-difference geometry.
double oracle_mixed(int ell, double eps) {
  const double L = ell;
  auto f = [&](double a, double lam) { return oracle::fd_reduced_even_component(a, ell, lam, ell); };
  return (f(eps, L + eps) - f(eps, L - eps) - f(-eps, L + eps) + f(-eps, L - eps)) / (4.0 * eps * eps);
}

double oracle_pure(int ell, double eps) {
  const double L = ell;
  auto f = [&](double a) { return oracle::fd_reduced_even_component(a, ell, L, 2 * ell); };
  return (f(eps) - 2.0 * f(0.0) + f(-eps)) / (eps * eps);
}

}  // namespace

TEST_CASE("trivial solutions", "[bifurcation]") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double v : reduced_even_rhs(EvenReducedState{std::vector<double>(16, 0.0), lambda})) {
      CHECK(std::abs(v) < 1e-12);
    }
  }
  CHECK(default_modes(1) == 32);
  CHECK(default_modes(6) == 48);
  CHECK(even_grid_size(32) == 128);
}

TEST_CASE("linearization at the trivial branch is lambda^2 - k^2", "[bifurcation]") {
  const double eps = 1e-7;
  for (double lambda : {0.8, 1.0, 2.5}) {
    for (int k = 1; k <= 5; ++k) {
      const auto g = reduced_even_rhs(state_with(16, lambda, k, eps));
      CHECK_THAT(g[k - 1] / eps, WithinAbs(lambda * lambda - double(k) * k, 1e-5));
    }
  }
}

TEST_CASE("unduloids are zeros of the reduced operator", "[bifurcation]") {
  const int m = 32, n = even_grid_size(m);
  for (auto [B, ell] : {std::pair{0.2, 1}, std::pair{0.1, 2}}) {
    const auto u = unduloid_profile(B, ell, n);
    EvenReducedState st{std::vector<double>(m), 1.0 / equivolume_radius(u)};
    for (int k = 1; k <= m; ++k) st.cos_coeffs[k - 1] = cosine_coefficient(u, k);
    for (double v : reduced_even_rhs(st)) CHECK(std::abs(v) < 1e-6);
  }
}

TEST_CASE("reduced operator argument checks", "[bifurcation]") {
  CHECK_THROWS_AS(reduced_even_rhs(EvenReducedState{std::vector<double>(16, 0.0), 1.0}, 32), PreconditionError);
  CHECK_THROWS_AS(lift_state(EvenReducedState{std::vector<double>(4, 0.0), -1.0}, 16), DomainError);
}

TEST_CASE("corrector", "[bifurcation]") {
  const int m = 32;
  SECTION("s = 0 returns the trivial solution") {
    const auto sol = corrector(state_with(m, 1.0, 1, 0.0), 1, 0.0);
    CHECK(sol.lambda == 1.0);
    for (double a : sol.cos_coeffs) CHECK(a == 0.0);
  }
  SECTION("branch is subcritical and symmetric under a half-period shift") {
    const auto plus = corrector(state_with(m, 1.0, 1, 0.05), 1, 0.05);
    const auto minus = corrector(state_with(m, 1.0, 1, -0.05), 1, -0.05);
    CHECK(plus.lambda < 1.0);
    CHECK_THAT(plus.cos_coeffs[0], WithinAbs(0.05, 1e-14));
    CHECK_THAT(minus.lambda, WithinAbs(plus.lambda, 1e-10));
    // x -> x + pi maps cos kx to (-1)^k cos kx.
    for (int k = 1; k <= m; ++k) {
      CHECK_THAT(minus.cos_coeffs[k - 1], WithinAbs((k % 2 ? -1.0 : 1.0) * plus.cos_coeffs[k - 1], 1e-10));
    }
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(corrector(state_with(8, 1.0, 1, 0.0), 3, 0.0), PreconditionError);
    CHECK_THROWS_AS(corrector(state_with(8, 1.0, 1, 0.0), 0, 0.0), PreconditionError);
  }
}

TEST_CASE("truncation converges", "[bifurcation]") {
  const auto a = corrector(state_with(32, 1.0, 1, 0.1), 1, 0.1);
  const auto b = corrector(state_with(64, 1.0, 1, 0.1), 1, 0.1);
  CHECK(std::abs(a.lambda - b.lambda) < 1e-8);
}

TEST_CASE("first branch", "[bifurcation]") {
  const auto b = trace_branch(1, 0.2, 10);
  REQUIRE_FALSE(b.truncated);
  REQUIRE(b.points.size() == 21);
  CHECK(b.points[10].s == 0.0);
  CHECK(b.points[10].state.lambda == 1.0);
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    CHECK(p.residual < 1e-9);
    if (p.s != 0.0) {
      CHECK(p.state.lambda < 1.0);
      CHECK(p.leading_eigenvalue.real() > 0.0);
    }
  }
  // lambda decreases in |s| on both sides.
  for (int i = 11; i < 21; ++i) {
    CHECK(b.points[i].state.lambda < b.points[i - 1].state.lambda);
    CHECK(b.points[20 - i].state.lambda < b.points[21 - i].state.lambda);
  }

  const auto fit = fit_pitchfork(b, 0.1);
  CHECK(fit.points_used == 11);
  CHECK_THAT(fit.lambda0, WithinAbs(1.0, 1e-6));
  CHECK(std::abs(fit.lambda_dot0) < 1e-3);
  CHECK(fit.lambda_ddot0 < 0.0);

  const auto match = compare_with_kenmotsu(b.points[15], 1);
  CHECK(match.distance < 1e-8);
  CHECK(match.B > 0.0);
}

TEST_CASE("curvature of the branch agrees with the unduloid family", "[bifurcation]") {
  // Independent route: along the unduloids of period 2pi, s is the cos x
  // coefficient and lambda the inverse equivolume radius. No flow operator is
  // involved.
  const int n = 256;
  std::vector<double> s2, lam;
  for (double B : {0.005, 0.01, 0.015, 0.02, 0.025, 0.03}) {
    const auto u = unduloid_profile(B, 1, n);
    const double s = cosine_coefficient(u, 1);
    s2.push_back(s * s);
    lam.push_back(1.0 / equivolume_radius(u));
  }
  Eigen::MatrixXd X(s2.size(), 3);
  Eigen::VectorXd y(s2.size());
  for (std::size_t i = 0; i < s2.size(); ++i) {
    X.row(i) << 1.0, s2[i], s2[i] * s2[i];
    y[i] = lam[i];
  }
  const Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
  const double geometric = 2.0 * c[1];

  const auto fit = fit_pitchfork(trace_branch(1, 0.1, 10), 0.1);
  CHECK_THAT(fit.lambda_ddot0, WithinRel(geometric, 1e-3));
  // Frozen from both routes.
  CHECK_THAT(fit.lambda_ddot0, WithinAbs(-1.5, 1e-3));
}

TEST_CASE("second branch is pi-periodic", "[bifurcation]") {
  const auto b = trace_branch(2, 0.1, 4);
  REQUIRE_FALSE(b.truncated);
  for (const auto& p : b.points) {
    for (int k = 1; k <= p.state.modes(); k += 2) CHECK(std::abs(p.state.cos_coeffs[k - 1]) < 1e-10);
    if (p.s != 0.0) CHECK(p.state.lambda < 2.0);
  }
}

TEST_CASE("branch argument checks", "[bifurcation]") {
  CHECK_THROWS_AS(trace_branch(2, 0.8, 4), PreconditionError);
  CHECK_THROWS_AS(trace_branch(0, 0.1, 4), PreconditionError);
  CHECK_THROWS_AS(trace_branch(1, 0.1, 0), PreconditionError);
  CHECK_THROWS_AS(fit_pitchfork(trace_branch(1, 0.1, 2)), InsufficientDataError);
}

TEST_CASE("no bifurcation between integers", "[bifurcation]") {
  const auto sol = solve_fixed_lambda(state_with(32, 1.5, 1, 0.02));
  for (double a : sol.cos_coeffs) CHECK(std::abs(a) < 1e-10);
}

TEST_CASE("leading eigenvalue crosses zero with slope 2 at lambda = 1", "[bifurcation]") {
  const double d = 1e-3;
  const double up = leading_even_eigenvalue(state_with(16, 1.0 + d, 1, 0.0)).real();
  const double down = leading_even_eigenvalue(state_with(16, 1.0 - d, 1, 0.0)).real();
  CHECK(down < 0.0);
  CHECK(up > 0.0);
  CHECK_THAT((up - down) / (2.0 * d), WithinAbs(2.0, 1e-5));
}

TEST_CASE("second derivatives at the bifurcation point", "[bifurcation]") {
  for (int ell : {1, 2}) {
    const auto rep = second_derivative_checks(ell);
    const double mixed = oracle_mixed(ell, 1e-4), pure = oracle_pure(ell, 1e-4);
    CHECK_THAT(rep.mixed_coefficient, WithinAbs(mixed, 1e-5 * ell));
    CHECK_THAT(rep.pure_coefficient, WithinRel(pure, 1e-4));
    // d/dlambda of lambda^2 - ell^2.
    CHECK_THAT(rep.mixed_coefficient, WithinAbs(2.0 * ell, 1e-4 * ell));
    CHECK_THAT(rep.pure_coefficient, WithinRel(-1.5 * ell * ell * ell, 1e-3));
  }
}
