#include "nullwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace nullwave {

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points,
                       double r2_gate) {
  FitResult f;
  std::vector<double> x, y;
  for (const auto& [d, v] : points) {
    if (d > 0.0 && v > 0.0 && std::isfinite(d) && std::isfinite(v)) {
      x.push_back(std::log(d));
      y.push_back(std::log(v));
    } else {
      ++f.excluded;
    }
  }
  f.used = static_cast<int>(x.size());
  if (f.used < 2) return f;
  const double n = f.used;
  double mx = 0.0, my = 0.0;
  for (int m = 0; m < f.used; ++m) {
    mx += x[m];
    my += y[m];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int m = 0; m < f.used; ++m) {
    sxx += (x[m] - mx) * (x[m] - mx);
    sxy += (x[m] - mx) * (y[m] - my);
    syy += (y[m] - my) * (y[m] - my);
  }
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (int m = 0; m < f.used; ++m) {
    const double e = y[m] - (f.intercept + f.slope * x[m]);
    sse += e * e;
  }
  // r2 = 1 for a flat series.
  f.r2 = syy > 1e-24 * std::max(1.0, my * my) ? 1.0 - sse / syy : 1.0;
  f.conclusive = f.used >= 3 && f.r2 >= r2_gate;
  return f;
}

void run_parallel(int count, int workers, const std::function<void(int)>& job) {
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int m = 0; m < count; ++m) job(m);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (int m = next++; m < count; m = next++) {
      try {
        job(m);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

const char* sweep_mode_name(SweepMode m) {
  switch (m) {
    case SweepMode::Theorem2FixedCap: return "theorem2_fixed_cap";
    case SweepMode::Theorem3ShrinkingCap: return "theorem3_shrinking_cap";
    case SweepMode::Spherical: return "spherical";
  }
  return "?";
}

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Done: return "done";
    case RunStatus::Breakdown: return "breakdown";
    case RunStatus::Skipped: return "skipped";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::NotApplicable: return "n/a";
  }
  return "?";
}

void SweepPlan::validate() const {
  if (deltas.empty()) throw std::invalid_argument("delta_list is empty");
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    if (!(deltas[m] > 0.0 && deltas[m] < 1.0))
      throw std::invalid_argument("delta_list entries must lie in (0, 1)");
    if (m > 0 && !(deltas[m] < deltas[m - 1]))
      throw std::invalid_argument("delta_list must be strictly decreasing");
  }
  if (!(u0 < -1.0)) throw std::invalid_argument("u0 must be < -1");
  if (!(E0 > 0.0)) throw std::invalid_argument("E0 must be positive");
  if (n_ubar < solver.min_ubar_cells_per_delta)
    throw std::invalid_argument("n_ubar violates the resolution rule dubar <= delta/" +
                                std::to_string(solver.min_ubar_cells_per_delta));
  if (n_u_per_unit < 1 || n_theta_min < 5 || theta_nodes_per_cap < 8)
    throw std::invalid_argument("resolution settings too coarse");
  if (!(fixed_cap_radius > 0.0 && fixed_cap_radius <= std::numbers::pi))
    throw std::invalid_argument("fixed_cap_radius must lie in (0, pi]");
  if (!(tube_margin >= 1.0)) throw std::invalid_argument("tube_margin must be >= 1");
  if (report_rows < 2) throw std::invalid_argument("report_rows must be >= 2");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const AngularMode am =
      mode == SweepMode::Spherical ? AngularMode::Spherical : AngularMode::Axisym;
  NullFormSpec(q, am);
  solver.validate();
}

PulseProfile sweep_profile(const SweepPlan& plan) {
  PulseProfile p;
  switch (plan.mode) {
    case SweepMode::Theorem2FixedCap:
      p.cap_mode = CapMode::Fixed;
      p.cap_radius = plan.fixed_cap_radius;
      break;
    case SweepMode::Theorem3ShrinkingCap: p.cap_mode = CapMode::SqrtDelta; break;
    case SweepMode::Spherical: p.cap_mode = CapMode::None; break;
  }
  return p;
}

GridSpec sweep_grid(const SweepPlan& plan, double delta, double u0) {
  GridSpec g;
  g.u0 = u0;
  g.delta = delta;
  g.n_u = static_cast<int>(std::ceil((std::abs(u0) - 1.0) * plan.n_u_per_unit - 1e-9));
  g.n_ubar = plan.n_ubar;
  if (plan.mode == SweepMode::Spherical) {
    g.mode = AngularMode::Spherical;
    g.n_theta = 1;
  } else {
    g.mode = AngularMode::Axisym;
    const double cap = sweep_profile(plan).cap_radius_at(delta);
    const int need =
        static_cast<int>(std::ceil(std::numbers::pi * plan.theta_nodes_per_cap / cap)) + 1;
    g.n_theta = std::max(plan.n_theta_min, need);
  }
  return g;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AngularMode angular_mode(const SweepPlan& plan) {
  return plan.mode == SweepMode::Spherical ? AngularMode::Spherical : AngularMode::Axisym;
}

void fill_diagnostics(DeltaRun& run, const FieldState& s, const SweepPlan& plan,
                      const NullFormSpec& spec) {
  const DoubleNullGrid& g = s.grid;
  const int last = g.n_u(), jd = g.n_ubar();
  run.stats = s.stats;
  run.norms_final = energy_norms(s, last, jd);
  run.lbar_l2_final = lbar_L2_on_Cu(s, last).value;
  const auto linf = linf_table(s);
  run.sup_lbar_final = linf.back().sup[2];
  run.exit_sup_u_lphi = trace_on_Cbar_delta(s).sup_u_lphi;
  run.interior_sup_u_lphi = trace_on_Cbar(s, jd / 2).sup_u_lphi;
  for (int j = 1; j < jd; ++j)
    run.interior_band_sup_u_lphi =
        std::max(run.interior_band_sup_u_lphi, trace_on_Cbar(s, j).sup_u_lphi);
  run.identity_l = energy_identity_residual(s, spec, Multiplier::L, last, jd);
  run.identity_lbar = energy_identity_residual(s, spec, Multiplier::Lbar, last, jd);
  if (g.mode() == AngularMode::Axisym)
    run.focus = focusing_report(s, run.cap_radius, plan.tube_margin, plan.report_rows);
  for (int m = 0; m < plan.report_rows; ++m) {
    const int i = static_cast<int>(
        std::lround(static_cast<double>(m) * g.n_u() / (plan.report_rows - 1)));
    USample smp;
    smp.u = g.u(i);
    smp.norms = energy_norms(s, i, jd);
    smp.linf = linf[i];
    smp.lbar_l2 = lbar_L2_on_Cu(s, i).value;
    if (run.focus) smp.focus = run.focus->rows[m];
    run.sobolev_max = std::max(run.sobolev_max, sobolev_ratio(s, i, jd));
    run.samples.push_back(smp);
  }
}

}  // namespace

DeltaRun run_single_delta(const SweepPlan& plan, double delta) {
  const auto t0 = std::chrono::steady_clock::now();
  DeltaRun run;
  run.delta = delta;
  run.grid = sweep_grid(plan, delta, plan.u0);
  try {
    const DoubleNullGrid g(run.grid);
    const NullFormSpec spec(plan.q, angular_mode(plan));
    const PulseProfile p = calibrate_amplitude(sweep_profile(plan), plan.E0, g);
    run.cap_radius = p.cap_radius_at(delta);
    run.amplitude = p.amplitude;
    const FieldState s = march(build_data(p, g), spec, g, plan.solver);
    run.status = RunStatus::Done;
    fill_diagnostics(run, s, plan, spec);
  } catch (const BreakdownError& e) {
    run.status = RunStatus::Breakdown;
    run.message = e.what();
  } catch (const ResolutionError& e) {
    run.status = RunStatus::Skipped;
    run.message = e.what();
  } catch (const std::invalid_argument& e) {
    run.status = RunStatus::Skipped;
    run.message = e.what();
  }
  run.runtime_s = seconds_since(t0);
  return run;
}

const AcceptanceRow* ScalingReport::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

Verdict ScalingReport::overall() const {
  bool inconclusive = false;
  for (const auto& r : rows) {
    if (!r.applies || r.verdict == Verdict::NotApplicable) continue;
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

namespace {

AcceptanceRow slope_row(const std::string& name, bool lower, double expected,
                        double threshold, bool applies, const std::vector<DeltaRun>& runs,
                        const std::function<std::optional<double>(const DeltaRun&)>& get) {
  AcceptanceRow r;
  r.name = name;
  r.kind = lower ? "slope_min" : "slope_max";
  r.expected = expected;
  r.threshold = threshold;
  r.applies = applies;
  std::vector<std::pair<double, double>> pts;
  for (const auto& run : runs) {
    if (run.status != RunStatus::Done) continue;
    if (auto v = get(run)) pts.emplace_back(run.delta, *v);
  }
  if (pts.empty()) {
    r.verdict = applies ? Verdict::Inconclusive : Verdict::NotApplicable;
    return r;
  }
  r.fit = fit_exponent(pts);
  r.value = r.fit.slope;
  if (!applies)
    r.verdict = Verdict::NotApplicable;
  else if (!r.fit.conclusive)
    r.verdict = Verdict::Inconclusive;
  else
    r.verdict = (lower ? r.value >= threshold : r.value <= threshold) ? Verdict::Pass
                                                                      : Verdict::Fail;
  return r;
}

AcceptanceRow ratio_row(const std::string& name, double bound,
                        const std::vector<DeltaRun>& runs,
                        const std::function<double(const DeltaRun&)>& get) {
  AcceptanceRow r;
  r.name = name;
  r.kind = "ratio_max";
  r.expected = 1.0;
  r.threshold = bound;
  double lo = INFINITY, hi = 0.0;
  int n = 0;
  for (const auto& run : runs) {
    if (run.status != RunStatus::Done) continue;
    const double v = get(run);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++n;
  }
  if (n >= 1 && hi <= 1e-300) {
    r.applies = false;
    r.verdict = Verdict::NotApplicable;
    return r;
  }
  if (n < 2 || !(lo > 0.0)) {
    r.verdict = Verdict::Inconclusive;
    return r;
  }
  r.value = hi / lo;
  r.verdict = r.value <= bound ? Verdict::Pass : Verdict::Fail;
  return r;
}

}  // namespace

ScalingReport run_delta_sweep(const SweepPlan& plan) {
  plan.validate();
  ScalingReport rep;
  rep.plan = plan;
  rep.runs.resize(plan.deltas.size());
  run_parallel(static_cast<int>(plan.deltas.size()), plan.workers,
               [&](int m) { rep.runs[m] = run_single_delta(plan, plan.deltas[m]); });

  const auto& runs = rep.runs;
  AcceptanceRow done;
  done.name = "no_breakdown";
  done.kind = "all_done";
  done.value = 0.0;
  for (const auto& run : runs)
    if (run.status != RunStatus::Done) done.value += 1.0;
  done.verdict = done.value == 0.0 ? Verdict::Pass : Verdict::Fail;
  rep.rows.push_back(done);

  for (int k = 0; k < 3; ++k)
    rep.rows.push_back(ratio_row("E" + std::to_string(k + 1) + "_ratio", 3.0, runs,
                                 [k](const DeltaRun& r) { return r.norms_final.E[k]; }));

  auto val = [](double DeltaRun::*field) {
    return [field](const DeltaRun& r) -> std::optional<double> { return r.*field; };
  };
  rep.rows.push_back(slope_row("lbar_l2", true, 1.0, 0.8, true, runs,
                               val(&DeltaRun::lbar_l2_final)));
  rep.rows.push_back(slope_row("lbar_l2_sq", true, 2.0, 1.6, true, runs,
                               [](const DeltaRun& r) -> std::optional<double> {
                                 return r.lbar_l2_final * r.lbar_l2_final;
                               }));
  rep.rows.push_back(slope_row("sup_lbar_phi", true, 0.5, 0.4, true, runs,
                               val(&DeltaRun::sup_lbar_final)));
  rep.rows.push_back(slope_row("exit_sup_u_lphi", true, 0.5, 0.4, true, runs,
                               val(&DeltaRun::exit_sup_u_lphi)));
  rep.rows.push_back(slope_row("interior_sup_u_lphi", false, -0.5, -0.3, true, runs,
                               val(&DeltaRun::interior_sup_u_lphi)));

  const bool focusing = plan.mode == SweepMode::Theorem3ShrinkingCap;
  auto focus = [](double FocusingReport::*field) {
    return [field](const DeltaRun& r) -> std::optional<double> {
      if (!r.focus) return std::nullopt;
      return (*r.focus).*field;
    };
  };
  rep.rows.push_back(slope_row("out_tube_energy", true, 2.0, 1.8, focusing, runs,
                               focus(&FocusingReport::out_tube_energy)));
  rep.rows.push_back(slope_row("in_tube_defect", true, 1.0, 0.8, focusing, runs,
                               focus(&FocusingReport::in_tube_defect)));
  rep.rows.push_back(slope_row("cbar_delta_flux", true, 1.0, 0.8, focusing, runs,
                               focus(&FocusingReport::cbar_delta_flux)));
  rep.rows.push_back(slope_row("lphi_drift", true, 0.5, 0.4, focusing, runs,
                               focus(&FocusingReport::lphi_drift)));
  return rep;
}

U0Report run_u0_convergence(const U0Plan& plan) {
  if (plan.u0_list.size() < 2) throw std::invalid_argument("u0_list needs >= 2 entries");
  SweepPlan base = plan.base;
  base.deltas = {plan.delta};
  base.validate();
  const AngularMode am = angular_mode(base);
  const NullFormSpec spec(base.q, am);
  const DoubleNullGrid gcal(sweep_grid(base, plan.delta, plan.calibration_u0));
  const PulseProfile p = calibrate_amplitude(sweep_profile(base), base.E0, gcal);

  U0Report rep;
  rep.u0_list = plan.u0_list;
  rep.common_slice_u = *std::max_element(plan.u0_list.begin(), plan.u0_list.end());
  const int n = static_cast<int>(plan.u0_list.size());
  rep.status.assign(n, RunStatus::Skipped);
  std::vector<std::vector<double>> lphi_final(n), radiation(n);
  run_parallel(n, base.workers, [&](int m) {
    const DoubleNullGrid g(sweep_grid(base, plan.delta, plan.u0_list[m]));
    try {
      const FieldState s = march(build_data(p, g), spec, g, base.solver);
      const int last = g.n_u();
      for (int j = 0; j < g.nodes_ubar(); ++j)
        for (int k = 0; k < g.nodes_theta(); ++k) lphi_final[m].push_back(s.lphi(last, j, k));
      radiation[m] = radiation_field(s, g.nearest_u(rep.common_slice_u));
      rep.status[m] = RunStatus::Done;
    } catch (const BreakdownError&) {
      rep.status[m] = RunStatus::Breakdown;
    }
  });
  auto maxdiff = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size()) return std::numeric_limits<double>::quiet_NaN();
    double d = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) d = std::max(d, std::abs(a[q] - b[q]));
    return d;
  };
  for (int m = 0; m + 1 < n; ++m) {
    rep.lphi_differences.push_back(maxdiff(lphi_final[m], lphi_final[m + 1]));
    rep.radiation_differences.push_back(maxdiff(radiation[m], radiation[m + 1]));
  }
  rep.monotone = true;
  for (double d : rep.lphi_differences)
    if (!std::isfinite(d)) rep.monotone = false;
  for (std::size_t m = 1; m < rep.lphi_differences.size(); ++m)
    if (!(rep.lphi_differences[m] < rep.lphi_differences[m - 1])) rep.monotone = false;
  return rep;
}

double L1Oracle::linear(double u, double ubar, double theta) const {
  const double s = ubar / delta;
  const double b = amplitude * delta * bump_derivative(s, 0);
  const double db = amplitude * bump_derivative(s, 1);
  const double r = ubar - u;
  return std::cos(theta) * (-0.5 * db + b / r) / r;
}

double L1Oracle::operator()(double u, double ubar, double theta) const {
  const double w = linear(u, ubar, theta);
  if (c0 == 0.0) return w;
  return -std::log1p(w) / c0;
}

CharacteristicData oracle_data(const L1Oracle& o, const DoubleNullGrid& g) {
  CharacteristicData d;
  d.delta = g.delta();
  d.u0 = g.u0();
  d.nodes_ubar = g.nodes_ubar();
  d.nodes_theta = g.nodes_theta();
  d.phi_on_Cu0.resize(static_cast<std::size_t>(d.nodes_ubar) * d.nodes_theta);
  for (int j = 0; j < d.nodes_ubar; ++j)
    for (int k = 0; k < d.nodes_theta; ++k)
      d.phi_on_Cu0[j * d.nodes_theta + k] = o(g.u0(), g.ubar(j), g.theta(k));
  return d;
}

namespace {

std::vector<double> orders_of(const std::vector<double>& e) {
  std::vector<double> out;
  for (std::size_t m = 1; m < e.size(); ++m)
    out.push_back(e[m] > 0.0 && e[m - 1] > 0.0 ? std::log2(e[m - 1] / e[m])
                                               : std::numeric_limits<double>::quiet_NaN());
  return out;
}

bool decreasing(const std::vector<double>& e) {
  for (std::size_t m = 1; m < e.size(); ++m)
    if (!(e[m] < e[m - 1])) return false;
  return true;
}

GridSpec refined(GridSpec g, int level) {
  const int f = 1 << level;
  g.n_u *= f;
  g.n_ubar *= f;
  g.n_theta = (g.n_theta - 1) * f + 1;
  return g;
}

// Max error against an exact solution at every node.
double oracle_error(const L1Oracle& o, const GridSpec& spec, const SolverConfig& cfg,
                    const NullFormCoeffs& q) {
  const DoubleNullGrid g(spec);
  const FieldState s = march(oracle_data(o, g), NullFormSpec(q, AngularMode::Axisym), g, cfg);
  double e = 0.0;
  for (int i = 0; i < g.nodes_u(); ++i)
    for (int j = 0; j < g.nodes_ubar(); ++j)
      for (int k = 0; k < g.nodes_theta(); ++k)
        e = std::max(e, std::abs(s.phi(i, j, k) - o(g.u(i), g.ubar(j), g.theta(k))));
  return e;
}

void exact_solution_study(const GridConvergencePlan& plan, GridConvergenceReport& rep) {
  SolverConfig oracle_cfg = plan.solver;
  oracle_cfg.enforce_resolution = false;
  const GridSpec obase{plan.u0, plan.oracle_delta, plan.oracle_n_u, plan.oracle_n_ubar,
                       AngularMode::Axisym, plan.oracle_n_theta};
  const bool pure_q0 = plan.q.c0 != 0.0 && [&] {
    NullFormCoeffs z = plan.q;
    z.c0 = 0.0;
    return z == NullFormCoeffs{};
  }();
  const int ol = plan.oracle_levels;
  rep.oracle_errors.assign(ol, 0.0);
  if (pure_q0) rep.exact_nonlinear_errors.assign(ol, 0.0);
  std::vector<double> oracle_time(ol, 0.0);
  run_parallel(pure_q0 ? 2 * ol : ol, plan.workers, [&](int m) {
    const int level = m % ol;
    const auto t0 = std::chrono::steady_clock::now();
    L1Oracle o{plan.oracle_delta, plan.oracle_amplitude, 0.0};
    if (m < ol) {
      rep.oracle_errors[level] = oracle_error(o, refined(obase, level), oracle_cfg, {});
      oracle_time[level] = seconds_since(t0);
    } else {
      o.c0 = plan.q.c0;
      rep.exact_nonlinear_errors[level] =
          oracle_error(o, refined(obase, level), oracle_cfg, plan.q);
    }
  });
  rep.oracle_orders = orders_of(rep.oracle_errors);
  rep.exact_nonlinear_orders = orders_of(rep.exact_nonlinear_errors);
  rep.finest_runtime_s.push_back(oracle_time.back());
}

}  // namespace

GridConvergenceReport run_grid_convergence(const GridConvergencePlan& plan) {
  if (plan.levels < 3 || plan.oracle_levels < 3)
    throw std::invalid_argument("grid convergence needs >= 3 levels");
  GridConvergenceReport rep;
  if (plan.oracle_study) exact_solution_study(plan, rep);
  if (!plan.pulse_study) {
    if (!decreasing(rep.oracle_errors) || !decreasing(rep.exact_nonlinear_errors)) {
      rep.inconclusive = true;
      rep.note = "non-monotone errors";
    }
    return rep;
  }

  const GridSpec base{plan.u0, plan.delta, plan.n_u, plan.n_ubar, AngularMode::Axisym,
                      plan.n_theta};
  PulseProfile p;
  p.cap_mode = CapMode::Fixed;
  p.cap_radius = plan.cap_radius;
  p = calibrate_amplitude(p, plan.E0, DoubleNullGrid(base));
  if (plan.zero_data) p.amplitude = 0.0;
  const NullFormSpec spec(plan.q, AngularMode::Axisym);
  const int L = plan.levels;
  std::vector<std::optional<FieldState>> states(L);
  std::vector<double> times(L, 0.0);
  run_parallel(L, plan.workers, [&](int level) {
    const auto t0 = std::chrono::steady_clock::now();
    const DoubleNullGrid g(refined(base, level));
    states[level].emplace(march(build_data(p, g), spec, g, plan.solver));
    times[level] = seconds_since(t0);
  });
  for (int level = 0; level < L; ++level) {
    const FieldState& s = *states[level];
    const int i = s.grid.n_u(), j = s.grid.n_ubar();
    rep.identity_l.push_back(
        energy_identity_residual(s, spec, Multiplier::L, i, j).relative_residual);
    rep.identity_lbar.push_back(
        energy_identity_residual(s, spec, Multiplier::Lbar, i, j).relative_residual);
  }
  for (int level = 0; level + 1 < L; ++level) {
    const FieldState& a = *states[level];
    const FieldState& b = *states[level + 1];
    double d = 0.0;
    for (int i = 0; i < a.grid.nodes_u(); ++i)
      for (int j = 0; j < a.grid.nodes_ubar(); ++j)
        for (int k = 0; k < a.grid.nodes_theta(); ++k)
          d = std::max(d, std::abs(a.phi(i, j, k) - b.phi(2 * i, 2 * j, 2 * k)));
    rep.richardson_differences.push_back(d);
  }
  rep.richardson_orders = orders_of(rep.richardson_differences);
  rep.finest_runtime_s.push_back(times.back());

  const bool zero = std::all_of(rep.richardson_differences.begin(),
                                rep.richardson_differences.end(),
                                [](double d) { return d == 0.0; });
  if (zero) {
    rep.inconclusive = true;
    rep.note = "zero differences, order undefined";
  } else if (!decreasing(rep.oracle_errors) || !decreasing(rep.richardson_differences) ||
             !decreasing(rep.exact_nonlinear_errors)) {
    rep.inconclusive = true;
    rep.note = "non-monotone errors";
  }
  return rep;
}

}  // namespace nullwave
