#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nullwave/nullform.hpp"
#include "nullwave/solver.hpp"

using namespace nullwave;

namespace {

FourVector random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng), n(rng), n(rng)};
}

FourVector random_null(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const double x = n(rng), y = n(rng), z = n(rng);
  const double t = std::sqrt(x * x + y * y + z * z) * (n(rng) > 0 ? 1.0 : -1.0);
  return {t, x, y, z};
}

// Hand-written forms, independent of the library's index bookkeeping.
double q0_direct(const FourVector& a, const FourVector& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double qab_direct(int i, int j, const FourVector& a, const FourVector& b) {
  return a[i] * b[j] - a[j] * b[i];
}

}  // namespace

TEST_CASE("minkowski products and null test") {
  const FourVector v{1.0, 1.0, 0.0, 0.0};
  CHECK(minkowski_sq(v) == 0.0);
  CHECK(euclid_sq(v) == 2.0);
  CHECK(is_null(v));
  CHECK_FALSE(is_null({1.0, 0.0, 0.0, 0.0}));
  CHECK(minkowski_dot({1, 2, 3, 4}, {5, 6, 7, 8}) == doctest::Approx(-5 + 12 + 21 + 32));
}

TEST_CASE("coefficients are antisymmetric by construction") {
  NullFormCoeffs q;
  q.set_c(1, 3, 2.5);
  CHECK(q.c(1, 3) == 2.5);
  CHECK(q.c(3, 1) == -2.5);
  CHECK(q.c(2, 2) == 0.0);
  CHECK_THROWS(q.set_c(2, 2, 1.0));
  q.add_pair(3, 1, 0.5);
  CHECK(q.c(1, 3) == doctest::Approx(2.0));
  CHECK(q.norm() == doctest::Approx(2.0));
  CHECK((2.0 * q).c(1, 3) == doctest::Approx(4.0));
  CHECK(NullFormCoeffs{}.is_zero());
}

TEST_CASE("basis forms match direct formulas") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 50; ++n) {
    const FourVector a = random_vector(rng), b = random_vector(rng);
    CHECK(evaluate_cartesian(basis_form(BasisKind::Q0), a, b) ==
          doctest::Approx(q0_direct(a, b)));
    CHECK(evaluate_cartesian(basis_form(BasisKind::Q01), a, b) ==
          doctest::Approx(qab_direct(0, 1, a, b)));
    CHECK(evaluate_cartesian(basis_form(BasisKind::Q23), a, b) ==
          doctest::Approx(qab_direct(2, 3, a, b)));
  }
}

TEST_CASE("every basis form vanishes on null covectors") {
  std::mt19937_64 rng(11);
  for (BasisKind k : kAllBasisKinds)
    for (int n = 0; n < 200; ++n) {
      const FourVector xi = random_null(rng);
      CHECK(std::abs(evaluate_cartesian(basis_form(k), xi, xi)) < 1e-12 * (1 + euclid_sq(xi)));
    }
}

TEST_CASE("frame derivatives of t and r") {
  const SpherePoint p{2.0, 0.7, 1.3};
  const FrameGradient gt = to_frame({1, 0, 0, 0}, p);
  CHECK(gt.l == doctest::Approx(1.0));
  CHECK(gt.lbar == doctest::Approx(1.0));
  CHECK(gt.ang[0] == doctest::Approx(0.0));

  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const FourVector dr{0, st * std::cos(p.phi_az), st * std::sin(p.phi_az), ct};
  const FrameGradient gr = to_frame(dr, p);
  CHECK(gr.l == doctest::Approx(1.0));
  CHECK(gr.lbar == doctest::Approx(-1.0));
  CHECK(gr.ang[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gr.ang[1] == doctest::Approx(0.0).epsilon(1e-14));

  // d(z) = cos(theta) dr - sin(theta) r dtheta, so e_theta z = -sin(theta).
  const FrameGradient gz = to_frame({0, 0, 0, 1}, p);
  CHECK(gz.ang[0] == doctest::Approx(-st));
  CHECK(gz.l == doctest::Approx(ct));
}

TEST_CASE("frame round trip") {
  std::mt19937_64 rng(3);
  const SpherePoint p{1.5, 2.1, -0.4};
  for (int n = 0; n < 20; ++n) {
    const FourVector v = random_vector(rng);
    const FourVector w = to_cartesian(to_frame(v, p), p);
    for (int a = 0; a < 4; ++a) CHECK(w[a] == doctest::Approx(v[a]));
  }
}

TEST_CASE("Q0 frame components are the inverse metric") {
  const FrameComponents fc = frame_components(basis_form(BasisKind::Q0), {3.0, 1.0, 0.2});
  CHECK(fc.q34 == doctest::Approx(-0.5));
  CHECK(fc.q43 == doctest::Approx(-0.5));
  CHECK(fc.qab[0][0] == doctest::Approx(1.0));
  CHECK(fc.qab[1][1] == doctest::Approx(1.0));
  CHECK(fc.qab[0][1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(fc.q4a[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("frame evaluation agrees with Cartesian evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  for (int n = 0; n < 100; ++n) {
    NullFormCoeffs q;
    q.c0 = U(rng) - 1.5;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) q.set_c(a, b, U(rng) - 1.5);
    const SpherePoint p{U(rng), U(rng), 2.0 * U(rng)};
    const FourVector a = random_vector(rng), b = random_vector(rng);
    const double cart = evaluate_cartesian(q, a, b);
    const double frame = evaluate_frame(frame_components(q, p), to_frame(a, p), to_frame(b, p));
    CHECK(frame == doctest::Approx(cart).epsilon(1e-12));
    const auto diag = frame_diagonal_null_terms(q, p);
    CHECK(std::abs(diag[0]) < 1e-12);
    CHECK(std::abs(diag[1]) < 1e-12);
    const double C = pointwise_bound_constant(q, p);
    CHECK(std::abs(cart) <= C * null_form_majorant(to_frame(a, p), to_frame(b, p)) + 1e-12);
  }
  CHECK_THROWS_AS(frame_components(basis_form(BasisKind::Q0), {0.0, 1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("null dimension certification") {
  for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(certify_null_dimension(500, seed) == 7);
  CHECK(certify_null_dimension(500, 1, true) == 1);
}

TEST_CASE("rotations commute with Q0") {
  for (RotationPair ij : {RotationPair{1, 2}, RotationPair{1, 3}, RotationPair{2, 3}})
    CHECK(rotation_commutator(basis_form(BasisKind::Q0), ij).norm() < 1e-14);
  CHECK_THROWS_AS(rotation_commutator(basis_form(BasisKind::Q0), {2, 2}), std::invalid_argument);
  // Omega_12 rotates Q13 into Q23 or its negative.
  const NullFormCoeffs t = rotation_commutator(basis_form(BasisKind::Q13), {1, 2});
  CHECK(std::abs(t.c(2, 3)) == doctest::Approx(1.0));
  CHECK(t.c0 == 0.0);
}

TEST_CASE("rotation values of z") {
  const SpherePoint p{2.0, 0.9, 0.5};
  const RotationValues w = rotation_values(p, to_frame({0, 0, 0, 1}, p));
  const double x = p.r * std::sin(p.theta) * std::cos(p.phi_az);
  const double y = p.r * std::sin(p.theta) * std::sin(p.phi_az);
  CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(x));
  CHECK(w[2] == doctest::Approx(y));
}

TEST_CASE("null direction commutator: closed form vs projector") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.2, 2.5);
  for (BasisKind k : kAllBasisKinds)
    for (NullDirection d : {NullDirection::L, NullDirection::Lbar}) {
      const SpherePoint p{U(rng), U(rng), U(rng)};
      const FourVector a = random_vector(rng), b = random_vector(rng);
      const FrameGradient ga = to_frame(a, p), gb = to_frame(b, p);
      const double c1 = null_direction_commutator(basis_form(k), d, p, ga, gb,
                                                  rotation_values(p, ga), rotation_values(p, gb));
      const double c2 = null_direction_commutator_projector(basis_form(k), d, p, ga, gb);
      CHECK(c1 == doctest::Approx(c2).epsilon(1e-12));
    }
}

TEST_CASE("admissible forms per angular mode") {
  NullFormCoeffs q03 = basis_form(BasisKind::Q03);
  CHECK(NullFormSpec::admissible(q03, AngularMode::Axisym));
  CHECK_FALSE(NullFormSpec::admissible(q03, AngularMode::Spherical));
  CHECK(NullFormSpec::admissible(basis_form(BasisKind::Q0), AngularMode::Spherical));
  CHECK_FALSE(NullFormSpec::admissible(basis_form(BasisKind::Q12), AngularMode::Axisym));
  CHECK_THROWS_WITH_AS(NullFormSpec(basis_form(BasisKind::Q12), AngularMode::Spherical),
                       "null form not admissible in spherical mode", std::invalid_argument);
}
