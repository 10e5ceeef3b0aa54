#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nullwave/algebra.hpp"
#include "nullwave/config.hpp"
#include "nullwave/io.hpp"

#ifndef NULLWAVE_GIT_DESCRIBE
#define NULLWAVE_GIT_DESCRIBE "unknown"
#endif

using namespace nullwave;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kProperty = 1, kFail = 2, kInconclusive = 3, kConfig = 64 };

struct Options {
  std::string config;
  int workers = 0;
  bool force = false;
  bool plots = false;
  int samples = 10000;
  bool corrupt = false;
};

RunConfig load(const Options& o) {
  RunConfig c = o.config.empty() ? parse_config(json{{"schema_version", kSchemaVersion}})
                                 : load_config(o.config);
  if (o.workers > 0) {
    c.worker_count = o.workers;
    c.sweep.workers = c.convergence.workers = c.u0.base.workers = o.workers;
  }
  return c;
}

json base_summary(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"config_hash", config_hash(c)},
          {"git_describe", NULLWAVE_GIT_DESCRIBE},
          {"config", to_json(c)}};
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass:
    case Verdict::NotApplicable: return kPass;
    case Verdict::Fail: return kFail;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kFail;
}

json norms_json(const EnergyNorms& n) {
  return {{"E", n.E}, {"Ebar", n.Ebar}, {"F", n.F}, {"Fbar", n.Fbar}};
}

json identity_json(const IdentityResidual& r) {
  return {{"multiplier", multiplier_name(r.multiplier)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"residual", r.residual},
          {"relative_residual", r.relative_residual},
          {"bulk_deformation", r.bulk_deformation},
          {"bulk_source", r.bulk_source},
          {"has_deformation_term", r.has_deformation_term}};
}

json stats_json(const MarchStats& s) {
  return {{"cells", s.cells},
          {"nonconverged_cells", s.nonconverged_cells},
          {"corrector_passes_max", s.corrector_passes_max},
          {"max_contraction", s.max_contraction},
          {"max_abs_psi", s.max_abs_psi},
          {"warnings", s.warnings}};
}

json fit_json(const FitResult& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2},
          {"used", f.used},   {"excluded", f.excluded},   {"conclusive", f.conclusive}};
}

json row_json(const AcceptanceRow& r) {
  return {{"name", r.name},           {"kind", r.kind},   {"expected", r.expected},
          {"threshold", r.threshold}, {"value", r.value}, {"applies", r.applies},
          {"verdict", verdict_name(r.verdict)}, {"fit", fit_json(r.fit)}};
}

int cmd_verify_algebra(const Options& o) {
  const RunConfig c = load(o);
  AlgebraSuiteOptions opt;
  opt.samples = o.samples;
  opt.corrupt_basis = o.corrupt;
  opt.seeds.clear();
  for (std::uint64_t s = 0; s < 5; ++s) opt.seeds.push_back(c.rng_seed + s);
  const AlgebraReport rep = run_algebra_suite(opt);
  std::printf("%-32s %-6s %-12s %-10s %s\n", "property", "result", "metric", "tolerance",
              "detail");
  for (const auto& p : rep.properties)
    std::printf("%-32s %-6s %-12.4g %-10.3g %s\n", p.name.c_str(), p.passed ? "ok" : "FAIL",
                p.metric, p.tolerance, p.detail.c_str());
  std::printf("dimension: %d\nsamples: %d\nruntime: %.2fs\n", rep.dimension, o.samples,
              rep.runtime_s);
  if (!rep.all_passed()) {
    for (const auto& p : rep.properties)
      if (!p.passed) std::fprintf(stderr, "property failed: %s\n", p.name.c_str());
    return kProperty;
  }
  return kPass;
}

int cmd_run(const Options& o) {
  const RunConfig c = load(o);
  const fs::path dir = resolve_output_dir(c.output_dir);
  prepare_output_dir(dir, o.force);
  const std::string hash = config_hash(c);
  json summary = base_summary(c, "run");
  const auto t0 = std::chrono::steady_clock::now();

  const DoubleNullGrid g(c.grid);
  const NullFormSpec spec(c.q, c.grid.mode);
  PulseProfile profile = c.profile;
  if (c.E0) profile = calibrate_amplitude(profile, *c.E0, g);
  summary["amplitude"] = profile.amplitude;
  CharacteristicData data;
  try {
    data = build_data(profile, g);
  } catch (const ResolutionError& e) {
    throw ConfigError("profile.cap_radius", e.what());
  }

  std::optional<FieldState> state;
  try {
    state.emplace(march(data, spec, g, c.solver));
  } catch (const BreakdownError& e) {
    summary["status"] = "breakdown";
    summary["breakdown"] = {{"i", e.i}, {"j", e.j}, {"u", e.u}, {"ubar", e.ubar},
                            {"value", e.value}, {"message", e.what()}};
    write_json(dir / "breakdown.json", summary["breakdown"]);
    write_json(dir / "summary.json", summary);
    std::fprintf(stderr, "breakdown: %s\n", e.what());
    return kFail;
  }
  const FieldState& s = *state;
  write_snapshot(dir, "psi", s.psi, g, "psi", hash);

  const auto linf = linf_table(s);
  std::vector<std::string> cols{"u"};
  for (const char* k : {"E1", "E2", "E3", "Ebar1", "Ebar2", "Ebar3", "F2", "F3", "Fbar2", "Fbar3",
                        "lbar_l2", "sobolev_ratio"})
    cols.emplace_back(k);
  for (const char* n : kLinfNames) cols.push_back(std::string("sup_") + n);
  for (const char* n : kLinfNames) cols.push_back(std::string("weighted_") + n);
  CsvWriter csv(dir / "diagnostics.csv", hash, cols);
  const int jd = g.n_ubar();
  for (int i = 0; i < g.nodes_u(); ++i) {
    const EnergyNorms n = energy_norms(s, i, jd);
    std::vector<double> row{g.u(i)};
    row.insert(row.end(), n.E.begin(), n.E.end());
    row.insert(row.end(), n.Ebar.begin(), n.Ebar.end());
    row.insert(row.end(), n.F.begin(), n.F.end());
    row.insert(row.end(), n.Fbar.begin(), n.Fbar.end());
    row.push_back(lbar_L2_on_Cu(s, i).value);
    row.push_back(sobolev_ratio(s, i, jd));
    row.insert(row.end(), linf[i].sup.begin(), linf[i].sup.end());
    row.insert(row.end(), linf[i].weighted.begin(), linf[i].weighted.end());
    csv.row(row);
  }

  const int last = g.n_u();
  summary["status"] = "done";
  summary["final"] = norms_json(energy_norms(s, last, jd));
  summary["final"]["u"] = g.u(last);
  summary["final"]["ubar"] = g.ubar(jd);
  summary["lbar_l2_final"] = lbar_L2_on_Cu(s, last).value;
  summary["exit_sup_u_lphi"] = trace_on_Cbar_delta(s).sup_u_lphi;
  summary["identity"] = json::array();
  for (Multiplier X : {Multiplier::L, Multiplier::Lbar, Multiplier::Omega})
    summary["identity"].push_back(identity_json(energy_identity_residual(s, spec, X, last, jd)));
  summary["pointwise_bound_excess"] = pointwise_bound_excess(s, spec);
  if (g.mode() == AngularMode::Axisym && c.profile.cap_mode != CapMode::None) {
    const FocusingReport f = focusing_report(s, profile.cap_radius_at(g.delta()));
    summary["focusing"] = {{"tube_radius", f.tube_radius},
                           {"out_tube_energy", f.out_tube_energy},
                           {"in_tube_defect", f.in_tube_defect},
                           {"cbar_delta_flux", f.cbar_delta_flux},
                           {"cbar_delta_flux_lbar", f.cbar_delta_flux_lbar},
                           {"lphi_drift", f.lphi_drift},
                           {"in_tube_ratio", f.in_tube_ratio}};
  }
  summary["stats"] = stats_json(s.stats);
  summary["runtime_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  summary["outputs"] = {"psi.bin", "psi.json", "diagnostics.csv", "summary.json"};
  write_json(dir / "summary.json", summary);
  std::printf("E1(-1, delta) = %.6g\nwrote %s\n", summary["final"]["E"][0].get<double>(),
              dir.string().c_str());
  return kPass;
}

std::string run_hash(const std::string& hash, double delta) {
  return hex64(fnv1a64(hash + ":" + format_number(delta)));
}

void write_sweep_outputs(const ScalingReport& rep, const RunConfig& c, const fs::path& dir,
                         bool plots, json& summary) {
  const std::string hash = config_hash(c);
  CsvWriter runs(dir / "sweep_runs.csv", hash,
                 {"delta", "status", "n_u", "n_ubar", "n_theta", "cap_radius", "amplitude", "E1",
                  "E2", "E3", "Ebar1", "Ebar2", "Ebar3", "lbar_l2", "sup_lbar_phi",
                  "exit_sup_u_lphi", "interior_sup_u_lphi", "interior_band_sup_u_lphi",
                  "out_tube_energy", "in_tube_defect", "cbar_delta_flux", "cbar_delta_flux_lbar",
                  "lphi_drift", "lphi_drift_weighted", "in_tube_ratio", "identity_L",
                  "identity_Lbar", "sobolev_max", "max_contraction", "nonconverged_cells",
                  "runtime_s"});
  CsvWriter samples(dir / "sweep_samples.csv", hash,
                    {"delta", "u", "E1", "E2", "E3", "Ebar1", "Ebar2", "Ebar3", "F2", "F3",
                     "Fbar2", "Fbar3", "lbar_l2", "sup_L_phi", "sup_ang_phi", "sup_Lbar_phi",
                     "weighted_L_phi", "weighted_ang_phi", "weighted_Lbar_phi", "in_tube",
                     "out_tube", "in_tube_defect"});
  json manifest = base_summary(c, "sweep");
  manifest["plan"] = {{"mode", sweep_mode_name(rep.plan.mode)}, {"deltas", rep.plan.deltas},
                      {"u0", rep.plan.u0}, {"E0", rep.plan.E0}};
  manifest["runs"] = json::array();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const DeltaRun& r : rep.runs) {
    const auto& n = r.norms_final;
    const FocusingReport f = r.focus.value_or(FocusingReport{});
    const double fv = r.focus ? 1.0 : nan;
    std::vector<std::string> cells{format_number(r.delta), run_status_name(r.status)};
    for (double v : {double(r.grid.n_u), double(r.grid.n_ubar), double(r.grid.n_theta),
                     r.cap_radius, r.amplitude, n.E[0], n.E[1], n.E[2], n.Ebar[0], n.Ebar[1],
                     n.Ebar[2], r.lbar_l2_final, r.sup_lbar_final, r.exit_sup_u_lphi,
                     r.interior_sup_u_lphi, r.interior_band_sup_u_lphi, fv * f.out_tube_energy,
                     fv * f.in_tube_defect, fv * f.cbar_delta_flux, fv * f.cbar_delta_flux_lbar,
                     fv * f.lphi_drift, fv * f.lphi_drift_weighted, fv * f.in_tube_ratio,
                     r.identity_l.relative_residual, r.identity_lbar.relative_residual,
                     r.sobolev_max, r.stats.max_contraction, double(r.stats.nonconverged_cells),
                     r.runtime_s})
      cells.push_back(format_number(v));
    runs.row(cells);
    for (const USample& u : r.samples) {
      std::vector<double> row{r.delta, u.u};
      row.insert(row.end(), u.norms.E.begin(), u.norms.E.end());
      row.insert(row.end(), u.norms.Ebar.begin(), u.norms.Ebar.end());
      row.insert(row.end(), u.norms.F.begin(), u.norms.F.end());
      row.insert(row.end(), u.norms.Fbar.begin(), u.norms.Fbar.end());
      row.push_back(u.lbar_l2);
      for (int q = 0; q < 3; ++q) row.push_back(u.linf.sup[q]);
      for (int q = 0; q < 3; ++q) row.push_back(u.linf.weighted[q]);
      row.push_back(u.focus ? u.focus->in_tube : nan);
      row.push_back(u.focus ? u.focus->out_tube : nan);
      row.push_back(u.focus ? u.focus->in_tube_defect : nan);
      samples.row(row);
    }
    manifest["runs"].push_back({{"delta", r.delta},
                                {"status", run_status_name(r.status)},
                                {"message", r.message},
                                {"config_hash", run_hash(hash, r.delta)},
                                {"outputs", {"sweep_runs.csv", "sweep_samples.csv"}}});
  }
  CsvWriter slopes(dir / "slopes.csv", hash,
                   {"name", "kind", "expected", "threshold", "value", "r2", "applies", "verdict"});
  summary["rows"] = json::array();
  for (const auto& r : rep.rows) {
    slopes.row(std::vector<std::string>{r.name, r.kind, format_number(r.expected),
                                        format_number(r.threshold), format_number(r.value),
                                        format_number(r.fit.r2), r.applies ? "1" : "0",
                                        verdict_name(r.verdict)});
    summary["rows"].push_back(row_json(r));
  }
  summary["overall"] = verdict_name(rep.overall());
  manifest["slopes"] = summary["rows"];
  manifest["overall"] = summary["overall"];
  manifest["outputs"] = {"sweep_runs.csv", "sweep_samples.csv", "slopes.csv", "summary.json"};
  if (plots) {
    std::vector<PlotSeries> series;
    for (const auto& r : rep.rows) {
      if (r.kind.rfind("slope", 0) != 0 || !r.applies) continue;
      PlotSeries ps;
      ps.label = r.name;
      for (const DeltaRun& d : rep.runs) {
        if (d.status != RunStatus::Done) continue;
        ps.x.push_back(d.delta);
        ps.y.push_back(std::exp(r.fit.intercept) * std::pow(d.delta, r.fit.slope));
      }
      series.push_back(ps);
    }
    write_loglog_svg(dir / "slopes.svg", "fitted power laws", series);
    manifest["outputs"].push_back("slopes.svg");
  }
  write_json(dir / "manifest.json", manifest);
  write_json(dir / "summary.json", summary);
}

void print_rows(const ScalingReport& rep) {
  for (const auto& r : rep.runs)
    std::printf("delta %-8g %-9s %6.1fs %s\n", r.delta, run_status_name(r.status), r.runtime_s,
                r.message.c_str());
  for (const auto& r : rep.rows)
    std::printf("%-22s %-9s threshold %7.3f value %9.4f r2 %6.3f  %s\n", r.name.c_str(),
                r.kind.c_str(), r.threshold, r.value, r.fit.r2, verdict_name(r.verdict));
}

int cmd_sweep(const Options& o) {
  const RunConfig c = load(o);
  const fs::path dir = resolve_output_dir(c.output_dir);
  prepare_output_dir(dir, o.force);
  const ScalingReport rep = run_delta_sweep(c.sweep);
  json summary = base_summary(c, "sweep");
  write_sweep_outputs(rep, c, dir, o.plots, summary);
  print_rows(rep);
  std::printf("overall: %s\n", verdict_name(rep.overall()));
  return verdict_exit(rep.overall());
}

int cmd_focus(const Options& o) {
  RunConfig c = load(o);
  c.sweep.mode = SweepMode::Theorem3ShrinkingCap;
  const fs::path dir = resolve_output_dir(c.output_dir);
  prepare_output_dir(dir, o.force);
  ScalingReport rep = run_delta_sweep(c.sweep);
  json summary = base_summary(c, "focus");
  write_sweep_outputs(rep, c, dir, o.plots, summary);
  CsvWriter fs_csv(dir / "focusing_slopes.csv", config_hash(c),
                   {"name", "expected", "threshold", "slope", "r2", "verdict"});
  std::vector<AcceptanceRow> focus_rows;
  for (const char* n : {"no_breakdown", "out_tube_energy", "in_tube_defect", "cbar_delta_flux",
                        "lphi_drift"}) {
    const AcceptanceRow* r = rep.row(n);
    focus_rows.push_back(*r);
    if (r->kind == "all_done") continue;
    fs_csv.row(std::vector<std::string>{r->name, format_number(r->expected),
                                        format_number(r->threshold), format_number(r->value),
                                        format_number(r->fit.r2), verdict_name(r->verdict)});
  }
  ScalingReport focus = rep;
  focus.rows = focus_rows;
  print_rows(focus);
  std::printf("focusing: %s\n", verdict_name(focus.overall()));
  return verdict_exit(focus.overall());
}

bool within(const std::vector<double>& v, double target, double tol) {
  if (v.empty()) return false;
  for (double x : v)
    if (!(std::abs(x - target) <= tol)) return false;
  return true;
}

bool ratios_at_least(const std::vector<double>& v, double bound) {
  if (v.size() < 2) return false;
  for (std::size_t m = 1; m < v.size(); ++m)
    if (!(v[m - 1] / v[m] >= bound)) return false;
  return true;
}

int cmd_converge(const Options& o) {
  RunConfig c = load(o);
  const fs::path dir = resolve_output_dir(c.output_dir);
  prepare_output_dir(dir, o.force);
  const std::string hash = config_hash(c);
  json summary = base_summary(c, "converge");
  const bool grid = c.converge_study != ConvergeStudy::U0;
  c.convergence.oracle_study =
      c.converge_study == ConvergeStudy::All || c.converge_study == ConvergeStudy::Linear;
  c.convergence.pulse_study =
      c.converge_study == ConvergeStudy::All || c.converge_study == ConvergeStudy::Nonlinear;

  bool fail = false, inconclusive = false;
  json checks = json::array();
  auto check = [&](const std::string& name, bool ok, const json& detail) {
    checks.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
    std::printf("%-28s %s\n", name.c_str(), ok ? "pass" : "fail");
    if (!ok) fail = true;
  };
  if (grid) {
    const GridConvergenceReport r = run_grid_convergence(c.convergence);
    CsvWriter csv(dir / "convergence.csv", hash,
                  {"study", "level", "error", "order"});
    auto emit = [&](const char* name, const std::vector<double>& e, const std::vector<double>& ord) {
      for (std::size_t m = 0; m < e.size(); ++m)
        csv.row(std::vector<std::string>{name, std::to_string(m), format_number(e[m]),
                                         m && m <= ord.size() ? format_number(ord[m - 1]) : "nan"});
    };
    emit("linear_oracle", r.oracle_errors, r.oracle_orders);
    emit("exact_nonlinear", r.exact_nonlinear_errors, r.exact_nonlinear_orders);
    emit("richardson", r.richardson_differences, r.richardson_orders);
    emit("identity_L", r.identity_l, {});
    emit("identity_Lbar", r.identity_lbar, {});
    if (c.convergence.oracle_study) {
      check("linear_oracle_order", within(r.oracle_orders, 2.0, 0.2), r.oracle_orders);
      if (!r.exact_nonlinear_orders.empty())
        check("exact_nonlinear_order", within(r.exact_nonlinear_orders, 2.0, 0.3),
              r.exact_nonlinear_orders);
    }
    if (c.convergence.pulse_study) {
      check("richardson_order", within(r.richardson_orders, 2.0, 0.3), r.richardson_orders);
      check("identity_L_ratio", ratios_at_least(r.identity_l, 3.0), r.identity_l);
      check("identity_Lbar_ratio", ratios_at_least(r.identity_lbar, 3.0), r.identity_lbar);
    }
    summary["grid"] = {{"oracle_errors", r.oracle_errors},
                       {"oracle_orders", r.oracle_orders},
                       {"exact_nonlinear_errors", r.exact_nonlinear_errors},
                       {"exact_nonlinear_orders", r.exact_nonlinear_orders},
                       {"richardson_differences", r.richardson_differences},
                       {"richardson_orders", r.richardson_orders},
                       {"identity_L", r.identity_l},
                       {"identity_Lbar", r.identity_lbar},
                       {"finest_runtime_s", r.finest_runtime_s},
                       {"inconclusive", r.inconclusive},
                       {"note", r.note}};
    if (r.inconclusive) inconclusive = true;
  }
  if (c.converge_study == ConvergeStudy::All || c.converge_study == ConvergeStudy::U0) {
    const U0Report r = run_u0_convergence(c.u0);
    CsvWriter csv(dir / "u0_convergence.csv", hash,
                  {"u0_a", "u0_b", "lphi_difference", "radiation_difference"});
    for (std::size_t m = 0; m < r.lphi_differences.size(); ++m)
      csv.row({r.u0_list[m], r.u0_list[m + 1], r.lphi_differences[m], r.radiation_differences[m]});
    std::vector<std::string> status;
    for (RunStatus s : r.status) status.push_back(run_status_name(s));
    summary["u0"] = {{"u0_list", r.u0_list},
                     {"status", status},
                     {"lphi_differences", r.lphi_differences},
                     {"radiation_differences", r.radiation_differences},
                     {"common_slice_u", r.common_slice_u},
                     {"monotone", r.monotone}};
    check("u0_monotone", r.monotone, r.lphi_differences);
  }
  summary["checks"] = checks;
  const Verdict v = fail ? Verdict::Fail : inconclusive ? Verdict::Inconclusive : Verdict::Pass;
  summary["overall"] = verdict_name(v);
  write_json(dir / "summary.json", summary);
  json manifest = base_summary(c, "converge");
  manifest["outputs"] = json::array({"summary.json"});
  if (grid) manifest["outputs"].push_back("convergence.csv");
  if (summary.contains("u0")) manifest["outputs"].push_back("u0_convergence.csv");
  manifest["overall"] = summary["overall"];
  write_json(dir / "manifest.json", manifest);
  std::printf("overall: %s\n", verdict_name(v));
  return verdict_exit(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullwave: characteristic solver and diagnostics for null-form wave equations"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration")->check(CLI::ExistingFile);
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  auto writer = [&](CLI::App* sub) {
    common(sub);
    sub->add_flag("--force", o.force, "allow a non-empty output directory");
    sub->add_flag("--plots", o.plots, "write SVG plots");
  };
  CLI::App* alg = app.add_subcommand("verify-algebra", "null-form algebra property suite");
  common(alg);
  alg->add_option("--samples", o.samples, "null samples per basis form")
      ->check(CLI::PositiveNumber);
  alg->add_flag("--inject-corrupt-basis", o.corrupt, "negative control");
  CLI::App* run = app.add_subcommand("run", "single march with full diagnostics");
  CLI::App* sweep = app.add_subcommand("sweep", "delta sweep with fitted exponents");
  CLI::App* conv = app.add_subcommand("converge", "grid and u0 convergence studies");
  CLI::App* focus = app.add_subcommand("focus", "shrinking-cap focusing sweep");
  for (CLI::App* s : {run, sweep, conv, focus}) writer(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }
  try {
    if (alg->parsed()) return cmd_verify_algebra(o);
    if (run->parsed()) return cmd_run(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (conv->parsed()) return cmd_converge(o);
    if (focus->parsed()) return cmd_focus(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  }
  return kConfig;
}
