#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nullwave/diagnostics.hpp"

namespace nullwave {

struct FitResult {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  int used = 0;
  int excluded = 0;
  /// At least 3 usable points and r2 >= the gate.
  bool conclusive = false;
};

/// Least squares of log(value) against log(delta). Non-positive or
/// non-finite values are excluded and counted.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points,
                       double r2_gate = 0.9);

/// Runs job(0..count-1) on up to `workers` threads. Jobs must write only
/// to their own slot; results therefore do not depend on scheduling.
void run_parallel(int count, int workers, const std::function<void(int)>& job);

enum class SweepMode { Theorem2FixedCap, Theorem3ShrinkingCap, Spherical };
const char* sweep_mode_name(SweepMode m);

struct SweepPlan {
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  double u0 = -8.0;
  double E0 = 1.0;
  SweepMode mode = SweepMode::Theorem2FixedCap;
  double fixed_cap_radius = 3.141592653589793;
  int n_ubar = 32;
  int n_u_per_unit = 64;
  int n_theta_min = 129;
  int theta_nodes_per_cap = 16;
  double tube_margin = 2.0;
  int report_rows = 9;
  NullFormCoeffs q = basis_form(BasisKind::Q0);
  SolverConfig solver{};
  int workers = 1;

  /// Throws std::invalid_argument on an unusable plan.
  void validate() const;
};

PulseProfile sweep_profile(const SweepPlan& plan);
GridSpec sweep_grid(const SweepPlan& plan, double delta, double u0);

enum class RunStatus { Done, Breakdown, Skipped };
const char* run_status_name(RunStatus s);

struct USample {
  double u = 0.0;
  EnergyNorms norms;
  LinfRow linf;
  double lbar_l2 = 0.0;
  std::optional<FocusingRow> focus;
};

struct DeltaRun {
  double delta = 0.0;
  RunStatus status = RunStatus::Skipped;
  std::string message;
  GridSpec grid;
  double cap_radius = 0.0;
  double amplitude = 0.0;
  EnergyNorms norms_final;
  double lbar_l2_final = 0.0;
  double sup_lbar_final = 0.0;
  double exit_sup_u_lphi = 0.0;
  double interior_sup_u_lphi = 0.0;       // slice ubar = delta/2
  double interior_band_sup_u_lphi = 0.0;  // all slices 0 < ubar < delta
  std::optional<FocusingReport> focus;
  IdentityResidual identity_l;
  IdentityResidual identity_lbar;
  double sobolev_max = 0.0;
  MarchStats stats;
  double runtime_s = 0.0;
  std::vector<USample> samples;
};

enum class Verdict { Pass, Fail, Inconclusive, NotApplicable };
const char* verdict_name(Verdict v);

struct AcceptanceRow {
  std::string name;
  std::string kind;            // "slope_min", "slope_max", "ratio_max", "all_done"
  double expected = 0.0;       // predicted exponent (slopes) or bound
  double threshold = 0.0;
  FitResult fit;
  double value = std::numeric_limits<double>::quiet_NaN();
  bool applies = true;
  Verdict verdict = Verdict::Inconclusive;
};

struct ScalingReport {
  SweepPlan plan;
  std::vector<DeltaRun> runs;
  std::vector<AcceptanceRow> rows;

  const AcceptanceRow* row(const std::string& name) const;
  /// Fail if any applicable row fails, else inconclusive if any is, else pass.
  Verdict overall() const;
};

/// Runs one delta of a sweep; never throws on breakdown.
DeltaRun run_single_delta(const SweepPlan& plan, double delta);

ScalingReport run_delta_sweep(const SweepPlan& plan);

struct U0Plan {
  std::vector<double> u0_list{-4.0, -8.0, -16.0};
  double delta = 0.05;
  /// The amplitude is calibrated once at this u0 and reused, so every run
  /// shares the same profile.
  double calibration_u0 = -8.0;
  SweepPlan base{};
};

struct U0Report {
  std::vector<double> u0_list;
  std::vector<RunStatus> status;
  /// max |L phi_a(-1) - L phi_b(-1)| for consecutive u0 pairs.
  std::vector<double> lphi_differences;
  /// max ||u| phi_a - |u| phi_b| on the latest common initial slice.
  std::vector<double> radiation_differences;
  double common_slice_u = 0.0;
  bool monotone = false;
};
U0Report run_u0_convergence(const U0Plan& plan);

struct GridConvergencePlan {
  double u0 = -4.0;
  double delta = 0.1;
  int n_u = 96;
  int n_ubar = 32;
  int n_theta = 33;
  int levels = 3;
  /// Levels of the exact-solution studies; they run on their own coarse grid
  /// with the resolution rule reported but not enforced.
  int oracle_levels = 4;
  double oracle_delta = 0.5;
  int oracle_n_u = 12;
  int oracle_n_ubar = 8;
  int oracle_n_theta = 17;
  double oracle_amplitude = 0.05;
  double cap_radius = 3.141592653589793;
  double E0 = 1.0;
  NullFormCoeffs q = basis_form(BasisKind::Q0);
  SolverConfig solver{};
  int workers = 1;
  /// When true the pulse data is replaced by zero (degenerate check).
  bool zero_data = false;
  bool oracle_study = true;
  bool pulse_study = true;
};

struct GridConvergenceReport {
  std::vector<double> oracle_errors;         // linear l = 1 exact solution
  std::vector<double> oracle_orders;
  std::vector<double> exact_nonlinear_errors; // exp(-c0 phi) = 1 + W
  std::vector<double> exact_nonlinear_orders;
  std::vector<double> richardson_differences; // |phi_h - phi_{h/2}| on coarse nodes
  std::vector<double> richardson_orders;
  std::vector<double> identity_l;             // relative residuals per level
  std::vector<double> identity_lbar;
  std::vector<double> finest_runtime_s;       // per study
  bool inconclusive = false;
  std::string note;
};
GridConvergenceReport run_grid_convergence(const GridConvergencePlan& plan);

/// Linear l = 1 solution phi = cos(theta) psi1 / r with
/// psi1 = -b'(ubar)/2 + b(ubar)/r, b(ubar) = A delta bump(ubar/delta).
/// For c0 != 0 returns -log(1 + W)/c0, an exact solution with Q = c0 Q0.
struct L1Oracle {
  double delta = 0.1;
  double amplitude = 0.05;
  double c0 = 0.0;
  double linear(double u, double ubar, double theta) const;
  double operator()(double u, double ubar, double theta) const;
};

CharacteristicData oracle_data(const L1Oracle& o, const DoubleNullGrid& g);

}  // namespace nullwave
