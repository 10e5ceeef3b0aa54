#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nullwave/geometry.hpp"

using namespace nullwave;
using std::numbers::pi;

namespace {

GridSpec axisym(int n_theta) {
  GridSpec s;
  s.u0 = -3.0;
  s.delta = 0.5;
  s.n_u = 8;
  s.n_ubar = 4;
  s.n_theta = n_theta;
  return s;
}

double laplacian_error(int n_theta) {
  const DoubleNullGrid g(axisym(n_theta));
  std::vector<double> f(g.nodes_theta()), out(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k) f[k] = std::cos(g.theta(k)) + std::cos(g.theta(k)) * std::cos(g.theta(k));
  const double r = 2.0;
  angular_laplacian(g, f, r, out);
  double err = 0.0;
  for (int k = 0; k < g.nodes_theta(); ++k) {
    const double c = std::cos(g.theta(k));
    // P1 eigenvalue -2, and cos^2 = 1/3 + (2/3) P2 with eigenvalue -6.
    const double exact = (-2.0 * c - 6.0 * (c * c - 1.0 / 3.0)) / (r * r);
    err = std::max(err, std::abs(out[k] - exact));
  }
  return err;
}

}  // namespace

TEST_CASE("grid coordinates") {
  const DoubleNullGrid g(axisym(17));
  CHECK(g.du() == doctest::Approx(0.25));
  CHECK(g.dubar() == doctest::Approx(0.125));
  CHECK(g.u(g.n_u()) == doctest::Approx(-1.0));
  CHECK(g.ubar(g.n_ubar()) == doctest::Approx(0.5));
  CHECK(g.r(0, 2) == doctest::Approx(3.25));
  CHECK(g.t(0, 2) == doctest::Approx(-2.75));
  CHECK(g.theta(0) == 0.0);
  CHECK(g.theta(16) == doctest::Approx(pi));
  CHECK(g.nearest_u(-1.9) == 4);
  const GridPoint p = g.point(1, 2, 3);
  CHECK(p.r == doctest::Approx(g.r(1, 2)));
  CHECK(p.theta == doctest::Approx(g.theta(3)));
}

TEST_CASE("invalid grids are refused") {
  GridSpec s = axisym(17);
  s.u0 = -0.5;
  CHECK_THROWS_AS(DoubleNullGrid{s}, std::invalid_argument);
  s = axisym(17);
  s.delta = 1.5;
  CHECK_THROWS_AS(DoubleNullGrid{s}, std::invalid_argument);
  s = axisym(3);
  CHECK_THROWS_AS(DoubleNullGrid{s}, std::invalid_argument);
  s = axisym(17);
  s.n_u = 1;
  CHECK_THROWS_AS(DoubleNullGrid{s}, std::invalid_argument);
}

TEST_CASE("sphere quadrature") {
  double err[3];
  const int sizes[] = {33, 65, 129};
  for (int m = 0; m < 3; ++m) {
    const DoubleNullGrid g(axisym(sizes[m]));
    double sum = 0.0;
    for (double w : g.sphere_weights()) sum += w;
    err[m] = std::abs(sum - 4.0 * pi);
    CHECK(g.sphere_weights().front() == 0.0);
  }
  CHECK(err[2] < 1e-3);
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.05));
  GridSpec s = axisym(5);
  s.mode = AngularMode::Spherical;
  const DoubleNullGrid sph(s);
  CHECK(sph.nodes_theta() == 1);
  CHECK(sph.sphere_weights()[0] == doctest::Approx(4.0 * pi));

  const DoubleNullGrid g(axisym(257));
  std::vector<double> f(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k) f[k] = std::pow(std::cos(g.theta(k)), 2);
  CHECK(sphere_integral(g, f, 2.0) == doctest::Approx(4.0 * pi * 4.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("angular Laplacian converges at second order") {
  const double e1 = laplacian_error(33), e2 = laplacian_error(65), e3 = laplacian_error(129);
  CHECK(e3 < 1e-3);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("angular gradient and theta derivatives") {
  const DoubleNullGrid g(axisym(129));
  std::vector<double> f(g.nodes_theta()), out(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k) f[k] = std::cos(g.theta(k));
  angular_gradient_sq(g, f, 2.0, out);
  for (int k : {10, 64, 100}) {
    const double s = std::sin(g.theta(k));
    CHECK(out[k] == doctest::Approx(s * s / 4.0).epsilon(1e-3));
    CHECK(theta_derivative(g, f, k, 1) == doctest::Approx(-s).epsilon(1e-3));
    CHECK(theta_derivative(g, f, k, 2) == doctest::Approx(-std::cos(g.theta(k))).epsilon(1e-3));
  }
  CHECK(std::abs(theta_derivative(g, f, 0, 1)) < 1e-12);
}

TEST_CASE("null frame vectors") {
  const DoubleNullGrid g(axisym(17));
  const FrameVectors f = frame_vectors(g.point(2, 1, 5));
  CHECK(std::abs(minkowski_sq(f.l)) < 1e-14);
  CHECK(std::abs(minkowski_sq(f.lbar)) < 1e-14);
  CHECK(minkowski_dot(f.l, f.lbar) == doctest::Approx(-2.0));
  CHECK(minkowski_sq(f.e_theta) == doctest::Approx(1.0));
  CHECK(std::abs(minkowski_dot(f.l, f.e_theta)) < 1e-14);
  GridPoint origin;
  CHECK_THROWS_AS(frame_vectors(origin), std::domain_error);
}

TEST_CASE("difference stencils are exact on quadratics") {
  auto q = [](int m) { const double x = 0.1 * m; return 3.0 * x * x - x + 2.0; };
  for (int m : {0, 3, 9}) {
    CHECK(diff1(q, m, 10, 0.1) == doctest::Approx(6.0 * 0.1 * m - 1.0));
    CHECK(diff2(q, m, 10, 0.1) == doctest::Approx(6.0));
  }
  auto lin = [](int m) { return 2.0 * m; };
  CHECK(trapezoid(lin, 5, 0.5) == doctest::Approx(8.0));
}

TEST_CASE("flux integrals of a constant density") {
  GridSpec s = axisym(65);
  s.n_ubar = 64;
  s.n_u = 64;
  const DoubleNullGrid g(s);
  auto one = [](int, int) { return 1.0; };
  const double u = g.u(0), d = g.delta();
  const double exact_cu = 4.0 * pi * (std::pow(d - u, 3) - std::pow(-u, 3)) / 3.0;
  CHECK(flux_integral_C_u(g, 0, one) == doctest::Approx(exact_cu).epsilon(1e-3));
  const double exact_cb = 4.0 * pi * (std::pow(d - g.u0(), 3) - std::pow(d + 1.0, 3)) / 3.0;
  CHECK(flux_integral_Cbar(g, g.n_ubar(), one) == doctest::Approx(exact_cb).epsilon(1e-3));
}
