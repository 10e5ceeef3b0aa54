// Acceptance suite: one line per criterion, "criterion N PASS|FAIL name: detail".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nullwave/algebra.hpp"
#include "nullwave/experiments.hpp"

using namespace nullwave;

namespace {

int g_workers = 4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string row_text(const AcceptanceRow& r) {
  return r.name + "=" + fmt("%.4g", r.value) + " (" + r.kind + " " + fmt("%.3g", r.threshold) +
         ", r2 " + fmt("%.3f", r.fit.r2) + ", " + verdict_name(r.verdict) + ")";
}

Outcome rows_pass(const ScalingReport& rep, const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const auto& n : names) {
    const AcceptanceRow* r = rep.row(n);
    if (!r) return {false, "missing row " + n};
    o.pass = o.pass && r->verdict == Verdict::Pass;
    o.detail += (o.detail.empty() ? "" : "; ") + row_text(*r);
  }
  return o;
}

const ScalingReport& default_sweep() {
  static const ScalingReport rep = [] {
    SweepPlan p;
    p.workers = g_workers;
    return run_delta_sweep(p);
  }();
  return rep;
}

Outcome c1_algebra() {
  AlgebraSuiteOptions opt;
  const AlgebraReport rep = run_algebra_suite(opt);
  Outcome o{true, ""};
  for (const char* n : {"dimension", "null_cone_vanishing", "frame_equivalence"}) {
    const PropertyResult* p = rep.find(n);
    o.pass = o.pass && p && p->passed;
    o.detail += std::string(n) + " " + (p ? fmt("%.3g", p->metric) : "missing") + "; ";
  }
  o.pass = o.pass && rep.dimension == 7 && rep.runtime_s < 10.0;
  o.detail += "dimension " + std::to_string(rep.dimension) + " over " +
              std::to_string(opt.seeds.size()) + " seeds; runtime " +
              fmt("%.2fs", rep.runtime_s) + " (limit 10s)";
  return o;
}

Outcome c2_commutators() {
  AlgebraSuiteOptions opt;
  opt.samples = 200;
  const AlgebraReport rep = run_algebra_suite(opt);
  const PropertyResult* rot = rep.find("rotation_commutator");
  Outcome o{rot && rot->passed && rot->metric <= 1e-12, ""};
  o.detail = "rotation " + (rot ? fmt("%.3g", rot->metric) : std::string("missing"));
  double lo = 1e9, hi = -1e9;
  for (BasisKind k : kAllBasisKinds)
    for (NullDirection d : {NullDirection::L, NullDirection::Lbar})
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const double ord = null_direction_fd_order(basis_form(k), d, seed).order;
        lo = std::min(lo, ord);
        hi = std::max(hi, ord);
      }
  o.pass = o.pass && lo >= 1.7 && hi <= 2.3;
  o.detail += "; fd order range [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] (2.0 +- 0.3)";
  return o;
}

bool all_within(const std::vector<double>& v, double target, double tol) {
  if (v.empty()) return false;
  for (double x : v)
    if (!(std::abs(x - target) <= tol)) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
  return "[" + s + "]";
}

const GridConvergenceReport& grid_study() {
  static const GridConvergenceReport rep = [] {
    GridConvergencePlan p;
    p.workers = g_workers;
    return run_grid_convergence(p);
  }();
  return rep;
}

Outcome c3_solver() {
  const GridConvergenceReport& r = grid_study();
  double finest = 0.0;
  for (double t : r.finest_runtime_s) finest = std::max(finest, t);
  Outcome o;
  o.pass = r.oracle_orders.size() >= 3 && all_within(r.oracle_orders, 2.0, 0.2) &&
           all_within(r.richardson_orders, 2.0, 0.3) && finest < 120.0;
  o.detail = "linear oracle orders " + list(r.oracle_orders) + " (2.0 +- 0.2); exact nonlinear " +
             list(r.exact_nonlinear_orders) + "; Richardson " + list(r.richardson_orders) +
             " (2.0 +- 0.3); finest level " + fmt("%.2fs", finest) + " (limit 120s)";
  return o;
}

bool dyadic_ratios(const std::vector<double>& v, double bound, std::string& text) {
  bool ok = v.size() >= 3;
  for (std::size_t m = 1; m < v.size(); ++m) {
    const double q = v[m - 1] / v[m];
    text += (m > 1 ? " " : "") + fmt("%.3g", q);
    ok = ok && q >= bound;
  }
  return ok;
}

Outcome c4_identity() {
  const GridConvergenceReport& r = grid_study();
  std::string tl, tb;
  const bool l = dyadic_ratios(r.identity_l, 3.0, tl);
  const bool lb = dyadic_ratios(r.identity_lbar, 3.0, tb);

  SweepPlan p;
  const double delta = 0.1;
  const DoubleNullGrid g(sweep_grid(p, delta, -4.0));
  const PulseProfile prof = calibrate_amplitude(sweep_profile(p), 1.0, g);
  const NullFormSpec spec(p.q, g.mode());
  const FieldState s = march(build_data(prof, g), spec, g, p.solver);
  const IdentityResidual om =
      energy_identity_residual(s, spec, Multiplier::Omega, g.n_u(), g.n_ubar());
  const bool omega = !om.has_deformation_term && om.bulk_deformation == 0.0;

  Outcome o{l && lb && omega, ""};
  o.detail = "L residual ratios " + tl + ", Lbar ratios " + tb + " (>= 3); Omega deformation " +
             (om.has_deformation_term ? "present" : "absent") + ", bulk " +
             fmt("%.3g", om.bulk_deformation);
  return o;
}

Outcome c5_data() {
  SweepPlan p;
  const PulseProfile prof = sweep_profile(p);
  std::vector<std::pair<double, double>> l2, lsup, asup;
  for (double d : p.deltas) {
    const DoubleNullGrid g(sweep_grid(p, d, p.u0));
    const PulseProfile cal = calibrate_amplitude(prof, p.E0, g);
    l2.emplace_back(d, std::sqrt(data_flux_L(cal, g)));
    const DataSupNorms n = data_sup_norms(cal, g);
    lsup.emplace_back(d, n.lphi);
    asup.emplace_back(d, n.ang_phi);
  }
  const FitResult f0 = fit_exponent(l2), f1 = fit_exponent(lsup), f2 = fit_exponent(asup);
  bool ok = std::abs(f0.slope) <= 0.05 && std::abs(f1.slope + 0.5) <= 0.05 &&
            std::abs(f2.slope - 0.5) <= 0.05;
  std::string text = "L2 Lphi " + fmt("%.4f", f0.slope) + ", sup Lphi " + fmt("%.4f", f1.slope) +
                     ", sup ang " + fmt("%.4f", f2.slope) + "; table";

  GridSpec base = sweep_grid(p, p.deltas.front(), p.u0);
  const DoubleNullGrid g0(base);
  const auto table = data_scaling_table(calibrate_amplitude(prof, p.E0, g0), p.deltas, base, 3);
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : table)
      if (row.k == k) pts.emplace_back(row.delta, row.norm);
    const FitResult f = fit_exponent(pts);
    ok = ok && std::abs(f.slope + (k - 1)) <= 0.1;
    text += " k" + std::to_string(k) + " " + fmt("%.4f", f.slope);
  }
  return {ok, text};
}

Outcome c6_boundedness() {
  return rows_pass(default_sweep(), {"no_breakdown", "E1_ratio", "E2_ratio", "E3_ratio"});
}

Outcome c7_focusing() {
  SweepPlan p;
  p.mode = SweepMode::Theorem3ShrinkingCap;
  p.workers = g_workers;
  const auto t0 = std::chrono::steady_clock::now();
  const ScalingReport rep = run_delta_sweep(p);
  const double t = seconds_since(t0);
  Outcome o = rows_pass(rep, {"no_breakdown", "out_tube_energy", "in_tube_defect",
                              "cbar_delta_flux", "lphi_drift"});
  for (const char* n : {"out_tube_energy", "in_tube_defect", "cbar_delta_flux", "lphi_drift"})
    o.pass = o.pass && rep.row(n)->fit.r2 >= 0.9;
  o.pass = o.pass && t < 1800.0;
  o.detail += "; sweep " + fmt("%.1fs", t);
  return o;
}

Outcome c8_lbar() { return rows_pass(default_sweep(), {"lbar_l2"}); }

Outcome c9_exit() {
  const ScalingReport& rep = default_sweep();
  Outcome o = rows_pass(rep, {"exit_sup_u_lphi", "interior_sup_u_lphi"});
  std::vector<std::pair<double, double>> band;
  for (const auto& r : rep.runs) band.emplace_back(r.delta, r.interior_band_sup_u_lphi);
  o.detail += "; interior band sup slope " + fmt("%.4f", fit_exponent(band).slope) +
              " (reported only)";
  return o;
}

Outcome c10_u0() {
  U0Plan p;
  p.base.workers = g_workers;
  const U0Report r = run_u0_convergence(p);
  return {r.monotone, "differences " + list(r.lphi_differences) + ", radiation " +
                          list(r.radiation_differences) + " at u0 " + list(r.u0_list)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  app.add_option("--workers", g_workers, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "null_form_algebra", c1_algebra},
      {2, "commutator_oracles", c2_commutators},
      {3, "solver_verification", c3_solver},
      {4, "energy_identity", c4_identity},
      {5, "data_scalings", c5_data},
      {6, "global_boundedness", c6_boundedness},
      {7, "focusing_sweep", c7_focusing},
      {8, "lbar_decay", c8_lbar},
      {9, "exit_surface_smallness", c9_exit},
      {10, "u0_stability", c10_u0},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d %s %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 2 : 0;
}
