#pragma once

#include <array>
#include <vector>

#include "nullwave/solver.hpp"

namespace nullwave {

struct StressComponents {
  Field3 t_ll;          // |L phi|^2
  Field3 t_llbar;       // |angular grad phi|^2
  Field3 t_lbarlbar;    // |Lbar phi|^2
};
StressComponents stress(const FieldState& s);

/// Weighted energy norms at (u(i), ubar(j)). E and Ebar hold orders 1..3,
/// F and Fbar hold orders 2..3. Angular derivatives of order k are
/// d_theta^k phi / r^k.
struct EnergyNorms {
  std::array<double, 3> E{};
  std::array<double, 3> Ebar{};
  std::array<double, 2> F{};
  std::array<double, 2> Fbar{};
};
EnergyNorms energy_norms(const FieldState& s, int i, int j);

enum class Multiplier { L, Lbar, Omega };
const char* multiplier_name(Multiplier m);

struct IdentityResidual {
  Multiplier multiplier = Multiplier::L;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
  double bulk_deformation = 0.0;
  double bulk_source = 0.0;
  /// False when the multiplier has no deformation term in its bulk
  /// integrand (rotations are Killing).
  bool has_deformation_term = true;
};

/// Flux identity over [u0, u(i)] x [0, ubar(j)]:
///   F_{C_u} + F_{Cbar_ubar} = F_{C_u0} - 2 int (K^X + Phi X phi),
/// with F_{C_u} = int T(X, L), F_{Cbar} = int T(X, Lbar), measure
/// r^2 dubar dsigma (resp. r^2 du dsigma), K^L = -K^Lbar = L phi Lbar phi / r.
IdentityResidual energy_identity_residual(const FieldState& s, const NullFormSpec& spec,
                                          Multiplier X, int i, int j,
                                          double floor = 1e-300);

struct LbarNorm {
  double value = 0.0;   // ||Lbar phi||_{L^2(C_u)}
  double weight = 0.0;  // delta / |u|
};
LbarNorm lbar_L2_on_Cu(const FieldState& s, int i);

inline constexpr std::array<const char*, 6> kLinfNames = {
    "L_phi", "ang_phi", "Lbar_phi", "L_ang_phi", "ang2_phi", "Lbar_ang_phi"};

struct LinfRow {
  double u = 0.0;
  std::array<double, 6> sup{};
  std::array<double, 6> weighted{};
};
/// One row per u node: sup over C_u of each quantity and its weighted value.
std::vector<LinfRow> linf_table(const FieldState& s);

struct FocusingRow {
  double u = 0.0;
  double in_tube = 0.0;
  double out_tube = 0.0;
  double in_tube_defect = 0.0;
};

struct FocusingReport {
  double tube_radius = 0.0;
  double split_angle = 0.0;
  std::vector<FocusingRow> rows;
  double out_tube_energy = 0.0;       // max over rows
  double in_tube_defect = 0.0;        // max over rows
  double cbar_delta_flux = 0.0;       // |L phi|^2 + |ang phi|^2 on Cbar_delta
  double cbar_delta_flux_lbar = 0.0;  // |Lbar phi|^2 + |ang phi|^2 on Cbar_delta
  double lphi_drift = 0.0;            // max |L phi(-1) - L phi(u0)|
  double lphi_drift_weighted = 0.0;   // same for |u| L phi
  double in_tube_ratio = 0.0;         // in_tube(-1) / in_tube(u0)
};

/// Splits C_u fluxes at margin * tube_radius. Rows at u0, equally spaced
/// interior slices and -1 (row_count >= 2). Throws std::invalid_argument in
/// spherical mode.
FocusingReport focusing_report(const FieldState& s, double tube_radius,
                               double margin = 2.0, int row_count = 9);

struct CbarTrace {
  int j = 0;
  double ubar = 0.0;
  int nodes_theta = 0;
  /// Per (u node, theta node), u-major.
  std::vector<double> phi, lphi, lbarphi, ang;
  double sup_u_lphi = 0.0;     // sup |u| |L phi|
  double sup_u2_ang = 0.0;     // sup |u|^2 |ang phi|
  double sup_u2_lbarphi = 0.0; // sup |u|^2 |Lbar phi|
};
CbarTrace trace_on_Cbar(const FieldState& s, int j);
CbarTrace trace_on_Cbar_delta(const FieldState& s);

/// |u(i)| phi(u(i), ., .), ubar-major over theta.
std::vector<double> radiation_field(const FieldState& s, int i);

/// |u|^{1/2} ||phi||_{L^4(S)} divided by
/// ||L phi||^{1/2}_{L^2(C_u)} (||phi||^{1/2}_{L^2(C_u)} + |u|^{1/2} ||ang phi||^{1/2}_{L^2(C_u)});
/// 0 when the denominator vanishes.
double sobolev_ratio(const FieldState& s, int i, int j);

/// max over nodes of |Q(grad phi, grad phi)| - C * majorant; <= 0 when the
/// pointwise bound holds everywhere.
double pointwise_bound_excess(const FieldState& s, const NullFormSpec& spec);

}  // namespace nullwave
