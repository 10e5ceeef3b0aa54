#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nullwave/diagnostics.hpp"

using namespace nullwave;
using std::numbers::pi;

namespace {

constexpr double kDelta = 0.5;
double F(double ub) { return 0.3 * bump(ub / kDelta); }
double dF(double ub) { return 0.3 * bump_derivative(ub / kDelta, 1) / kDelta; }

SolverConfig loose() {
  SolverConfig c;
  c.enforce_resolution = false;
  return c;
}

GridSpec spherical(int n_u, int n_ubar) {
  GridSpec s;
  s.u0 = -4.0;
  s.delta = kDelta;
  s.n_u = n_u;
  s.n_ubar = n_ubar;
  s.mode = AngularMode::Spherical;
  return s;
}

// psi = F(ubar), phi = F / r.
FieldState linear_wave(const DoubleNullGrid& g) {
  CharacteristicData d;
  d.delta = g.delta();
  d.u0 = g.u0();
  d.nodes_ubar = g.nodes_ubar();
  d.nodes_theta = 1;
  for (int j = 0; j < g.nodes_ubar(); ++j) d.phi_on_Cu0.push_back(F(g.ubar(j)) / g.r(0, j));
  return march(d, NullFormSpec({}, g.mode()), g, loose());
}

// Simpson rule on [a, b] with n (even) panels.
template <class Fn>
double simpson(Fn f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int m = 1; m < n; ++m) s += f(a + m * h) * (m % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("Lbar flux on an outgoing cone") {
  const DoubleNullGrid g(spherical(96, 128));
  const FieldState s = linear_wave(g);
  for (int i : {0, 48, 96}) {
    const double u = g.u(i);
    // Lbar phi = d_u (F / r) = F / r^2, so the flux is 4 pi int F^2 / r^2 dubar.
    const double exact =
        std::sqrt(4.0 * pi * simpson([&](double ub) { return std::pow(F(ub) / (ub - u), 2); },
                                     0.0, kDelta, 2000));
    const LbarNorm n = lbar_L2_on_Cu(s, i);
    CHECK(n.value == doctest::Approx(exact).epsilon(2e-3));
    CHECK(n.weight == doctest::Approx(kDelta / std::abs(u)));
  }
}

TEST_CASE("incoming-cone trace and radiation field") {
  const DoubleNullGrid g(spherical(96, 128));
  const FieldState s = linear_wave(g);
  const int j = 40;
  const double ub = g.ubar(j);
  double sup = 0.0;
  for (int i = 0; i < g.nodes_u(); ++i) {
    const double r = g.r(i, j);
    sup = std::max(sup, std::abs(g.u(i)) * std::abs(dF(ub) / r - F(ub) / (r * r)));
  }
  const CbarTrace t = trace_on_Cbar(s, j);
  CHECK(t.j == j);
  CHECK(t.ubar == doctest::Approx(ub));
  CHECK(t.sup_u_lphi == doctest::Approx(sup).epsilon(5e-3));
  CHECK(trace_on_Cbar_delta(s).j == g.n_ubar());

  const auto rad = radiation_field(s, 10);
  REQUIRE(rad.size() == static_cast<std::size_t>(g.nodes_ubar()));
  CHECK(rad[j] == doctest::Approx(std::abs(g.u(10)) * F(ub) / g.r(10, j)));
}

TEST_CASE("stress components and energy norms") {
  const DoubleNullGrid g(spherical(24, 32));
  const FieldState s = linear_wave(g);
  const StressComponents t = stress(s);
  CHECK(t.t_ll(3, 5, 0) == doctest::Approx(s.lphi(3, 5, 0) * s.lphi(3, 5, 0)));
  CHECK(t.t_llbar(3, 5, 0) == 0.0);
  const EnergyNorms n = energy_norms(s, g.n_u(), g.n_ubar());
  CHECK(n.E[0] > 0.0);
  CHECK(n.E[1] == 0.0);

  CharacteristicData zero;
  zero.delta = g.delta();
  zero.u0 = g.u0();
  zero.nodes_ubar = g.nodes_ubar();
  zero.nodes_theta = 1;
  zero.phi_on_Cu0.assign(g.nodes_ubar(), 0.0);
  const FieldState z = march(zero, NullFormSpec(basis_form(BasisKind::Q0), g.mode()), g, loose());
  const EnergyNorms nz = energy_norms(z, g.n_u(), g.n_ubar());
  CHECK(nz.E[0] == 0.0);
  CHECK(nz.Ebar[0] == 0.0);
  CHECK(sobolev_ratio(z, g.n_u(), g.n_ubar()) == 0.0);
}

TEST_CASE("energy identity residual shrinks at second order") {
  double res[3];
  for (int level = 0; level < 3; ++level) {
    const DoubleNullGrid g(spherical(96 << level, 32 << level));
    const FieldState s = linear_wave(g);
    const NullFormSpec none({}, g.mode());
    res[level] = energy_identity_residual(s, none, Multiplier::L, g.n_u(), g.n_ubar())
                     .relative_residual;
    const IdentityResidual om =
        energy_identity_residual(s, none, Multiplier::Omega, g.n_u(), g.n_ubar());
    CHECK_FALSE(om.has_deformation_term);
    CHECK(om.bulk_deformation == 0.0);
  }
  CHECK(res[0] / res[1] >= 3.0);
  CHECK(res[1] / res[2] >= 3.0);
  CHECK(std::string(multiplier_name(Multiplier::Lbar)) == "Lbar");
}

TEST_CASE("sup-norm table and pointwise bound on an axisymmetric run") {
  GridSpec gs = spherical(64, 32);
  gs.mode = AngularMode::Axisym;
  gs.n_theta = 65;
  gs.delta = 0.1;
  gs.u0 = -3.0;
  const DoubleNullGrid g(gs);
  PulseProfile p;
  p.cap_radius = 1.5;
  p.amplitude = 0.5;
  const NullFormSpec q0(basis_form(BasisKind::Q0), g.mode());
  const FieldState s = march(build_data(p, g), q0, g, loose());
  const auto table = linf_table(s);
  REQUIRE(table.size() == static_cast<std::size_t>(g.nodes_u()));
  CHECK(table[0].u == doctest::Approx(g.u0()));
  for (const auto& row : table)
    for (int q = 0; q < 6; ++q) CHECK(row.sup[q] >= 0.0);
  CHECK(pointwise_bound_excess(s, q0) <= 1e-12);

  const FocusingReport f = focusing_report(s, 1.5, 2.0, 5);
  CHECK(f.rows.size() == 5);
  CHECK(f.tube_radius == doctest::Approx(1.5));
  CHECK(f.cbar_delta_flux >= 0.0);
  for (const auto& row : f.rows) {
    CHECK(row.in_tube >= 0.0);
    CHECK(row.out_tube >= 0.0);
  }
}
