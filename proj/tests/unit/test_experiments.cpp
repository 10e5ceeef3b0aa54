#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>

#include "nullwave/experiments.hpp"

using namespace nullwave;

namespace {

std::vector<std::pair<double, double>> power_law(double c, double p,
                                                 const std::vector<double>& noise = {}) {
  std::vector<std::pair<double, double>> pts;
  const double d[] = {0.2, 0.1, 0.05, 0.025};
  for (int m = 0; m < 4; ++m)
    pts.emplace_back(d[m], c * std::pow(d[m], p) * (1.0 + (noise.empty() ? 0.0 : noise[m])));
  return pts;
}

SweepPlan small_plan() {
  SweepPlan p;
  p.deltas = {0.2, 0.1};
  p.u0 = -2.0;
  p.n_ubar = 32;
  p.n_u_per_unit = 32;
  p.n_theta_min = 33;
  p.report_rows = 3;
  return p;
}

}  // namespace

TEST_CASE("exponent fits") {
  const FitResult exact = fit_exponent(power_law(3.0, 1.5));
  CHECK(exact.slope == doctest::Approx(1.5));
  CHECK(std::exp(exact.intercept) == doctest::Approx(3.0));
  CHECK(exact.r2 == doctest::Approx(1.0));
  CHECK(exact.conclusive);

  const FitResult flat = fit_exponent(power_law(2.0, 0.0));
  CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.used == 4);

  const FitResult noisy = fit_exponent(power_law(1.0, 0.5, {0.01, -0.01, 0.01, -0.01}));
  CHECK(noisy.slope == doctest::Approx(0.5).epsilon(0.05));
  CHECK(noisy.conclusive);

  auto pts = power_law(1.0, 1.0);
  pts[1].second = 0.0;
  pts[2].second = std::nan("");
  const FitResult few = fit_exponent(pts);
  CHECK(few.used == 2);
  CHECK(few.excluded == 2);
  CHECK_FALSE(few.conclusive);

  const FitResult scattered = fit_exponent(power_law(1.0, 0.0, {0.9, -0.5, 0.7, -0.6}));
  CHECK_FALSE(scattered.conclusive);
}

TEST_CASE("parallel runner is deterministic") {
  auto run = [](int workers) {
    std::vector<double> out(64);
    std::atomic<int> calls{0};
    run_parallel(64, workers, [&](int k) {
      ++calls;
      double s = 0.0;
      for (int m = 1; m <= 1000 + k; ++m) s += 1.0 / (m * m + k);
      out[k] = s;
    });
    CHECK(calls == 64);
    return out;
  };
  CHECK(run(1) == run(4));
  CHECK(run(1) == run(16));
}

TEST_CASE("sweep grids follow the resolution rule") {
  SweepPlan p;
  for (double d : p.deltas) {
    const GridSpec g = sweep_grid(p, d, -8.0);
    CHECK(g.delta / g.n_ubar <= d / p.solver.min_ubar_cells_per_delta + 1e-15);
    CHECK(g.n_u == 7 * p.n_u_per_unit);
    CHECK(g.n_theta >= p.n_theta_min);
  }
  p.mode = SweepMode::Theorem3ShrinkingCap;
  const GridSpec g = sweep_grid(p, 0.025, -8.0);
  const double cap = std::sqrt(0.025);
  CHECK((std::numbers::pi / (g.n_theta - 1)) * p.theta_nodes_per_cap <= cap + 1e-12);

  CHECK(sweep_profile(p).cap_mode == CapMode::SqrtDelta);
  p.mode = SweepMode::Spherical;
  CHECK(sweep_profile(p).cap_mode == CapMode::None);
  CHECK(sweep_grid(p, 0.1, -8.0).mode == AngularMode::Spherical);
  CHECK(std::string(sweep_mode_name(SweepMode::Theorem2FixedCap)) == "theorem2_fixed_cap");

  p.deltas.clear();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("single-delta run and row verdicts") {
  SweepPlan p = small_plan();
  const DeltaRun r = run_single_delta(p, 0.2);
  REQUIRE(r.status == RunStatus::Done);
  CHECK(r.amplitude > 0.0);
  CHECK(r.samples.size() == 3);
  CHECK(r.lbar_l2_final > 0.0);
  CHECK(r.exit_sup_u_lphi > 0.0);
  CHECK(r.interior_band_sup_u_lphi >= r.interior_sup_u_lphi);

  p.fixed_cap_radius = 0.01;
  p.n_theta_min = 9;
  p.theta_nodes_per_cap = 1;
  const DeltaRun skipped = run_single_delta(p, 0.2);
  CHECK(skipped.status == RunStatus::Skipped);
  CHECK_FALSE(skipped.message.empty());

  ScalingReport rep;
  AcceptanceRow a{"a", "slope_min", 1.0, 0.8, {}, 1.0, true, Verdict::Pass};
  AcceptanceRow b = a;
  b.name = "b";
  b.verdict = Verdict::NotApplicable;
  b.applies = false;
  rep.rows = {a, b};
  CHECK(rep.overall() == Verdict::Pass);
  rep.rows[1] = a;
  rep.rows[1].verdict = Verdict::Inconclusive;
  CHECK(rep.overall() == Verdict::Inconclusive);
  rep.rows[0].verdict = Verdict::Fail;
  CHECK(rep.overall() == Verdict::Fail);
  CHECK(rep.row("a") != nullptr);
  CHECK(rep.row("zz") == nullptr);
  CHECK(std::string(verdict_name(Verdict::NotApplicable)) == "n/a");
}

TEST_CASE("sweep assembles rows per mode") {
  SweepPlan p = small_plan();
  p.deltas = {0.2, 0.1, 0.05};
  p.workers = 3;
  const ScalingReport rep = run_delta_sweep(p);
  REQUIRE(rep.runs.size() == 3);
  REQUIRE(rep.row("no_breakdown"));
  CHECK(rep.row("no_breakdown")->verdict == Verdict::Pass);
  CHECK_FALSE(rep.row("out_tube_energy")->applies);
  CHECK(rep.row("lbar_l2")->fit.used == 3);
  CHECK(rep.row("lbar_l2")->value > 0.5);
}

TEST_CASE("l = 1 oracle and its nonlinear transform") {
  L1Oracle lin{0.5, 0.05, 0.0};
  const double u = -3.0, ub = 0.2, th = 0.4;
  const double r = ub - u;
  const double b = 0.05 * 0.5 * bump(ub / 0.5), bp = 0.05 * bump_derivative(ub / 0.5, 1);
  CHECK(lin(u, ub, th) == doctest::Approx(std::cos(th) * (-0.5 * bp + b / r) / r));
  L1Oracle nl{0.5, 0.05, 2.0};
  CHECK(nl(u, ub, th) == doctest::Approx(-std::log1p(lin.linear(u, ub, th)) / 2.0));

  GridSpec gs;
  gs.u0 = -4.0;
  gs.delta = 0.5;
  gs.n_u = 12;
  gs.n_ubar = 8;
  gs.n_theta = 17;
  const DoubleNullGrid g(gs);
  const CharacteristicData d = oracle_data(lin, g);
  CHECK(d.at(3, 5) == doctest::Approx(lin(g.u0(), g.ubar(3), g.theta(5))));
  CHECK(d.at(0, 5) == 0.0);
}

TEST_CASE("grid convergence of the exact-solution studies") {
  GridConvergencePlan p;
  p.pulse_study = false;
  p.oracle_levels = 3;
  const GridConvergenceReport r = run_grid_convergence(p);
  REQUIRE(r.oracle_orders.size() == 2);
  for (double o : r.oracle_orders) CHECK(o == doctest::Approx(2.0).epsilon(0.1));
  for (double o : r.exact_nonlinear_orders) CHECK(o == doctest::Approx(2.0).epsilon(0.1));
  CHECK(r.richardson_orders.empty());
}
