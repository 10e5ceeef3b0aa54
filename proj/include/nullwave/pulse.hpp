#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "nullwave/geometry.hpp"

namespace nullwave {

/// exp(4 - 1/(s(1-s))) on (0, 1), zero elsewhere; maximum 1 at s = 1/2.
double bump(double s);
/// d^order bump / ds^order, order in 0..3.
double bump_derivative(double s, int order);

/// Even angular cap on [-1, 1]: bump((1 + x)/2); derivatives in x.
double cap_profile(double x, int order = 0);

enum class CapMode { Fixed, SqrtDelta, None };

struct PulseProfile {
  double amplitude = 1.0;
  CapMode cap_mode = CapMode::Fixed;
  /// Angular support radius for CapMode::Fixed.
  double cap_radius = 0.6;
  std::optional<double> target_energy;

  /// Cap radius in effect at a given delta; pi means no cap.
  double cap_radius_at(double delta) const;

  /// d_s^ks d_theta^kt psi0(s, theta), ks in 0..3, kt in 0..3.
  double psi0(double s, double theta, double delta, int ks = 0, int kt = 0) const;
};

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CharacteristicData {
  double delta = 0.0;
  double u0 = 0.0;
  int nodes_ubar = 0;
  int nodes_theta = 0;
  /// phi on C_{u0}, ubar-major then theta. The data on Cbar_0 is zero.
  std::vector<double> phi_on_Cu0;

  double at(int j, int k) const { return phi_on_Cu0[j * nodes_theta + k]; }
};

/// Throws ResolutionError when an axisymmetric cap spans fewer than 8 theta
/// nodes, std::invalid_argument when a cap is used in spherical mode.
CharacteristicData build_data(const PulseProfile& profile, const DoubleNullGrid& g);

/// Analytic d_ubar^k phi on C_{u0}: delta^{1/2 - k} |u0|^{-1} psi0^{(k)}.
double data_ubar_derivative(const PulseProfile& profile, const DoubleNullGrid& g,
                            int j, int k_theta_node, int order);

/// int_{C_u0} |L phi|^2 with L phi from the analytic s-derivative.
double data_flux_L(const PulseProfile& profile, const DoubleNullGrid& g);

/// Rescales the amplitude so data_flux_L equals E0. Throws on E0 <= 0.
PulseProfile calibrate_amplitude(const PulseProfile& profile, double E0,
                                 const DoubleNullGrid& g);

struct DataScalingRow {
  int k = 0;
  double delta = 0.0;
  double norm = 0.0;
};

/// ||d_ubar^k phi||_{L^2(C_u0)} for k = 1..k_max over the delta list. The
/// grid template supplies u0, resolution and angular mode.
std::vector<DataScalingRow> data_scaling_table(const PulseProfile& profile,
                                               const std::vector<double>& deltas,
                                               const GridSpec& base, int k_max = 3);

struct DataSupNorms {
  double lphi = 0.0;      // sup |d_ubar phi|
  double ang_phi = 0.0;   // sup |(1/r) d_theta phi|
};
DataSupNorms data_sup_norms(const PulseProfile& profile, const DoubleNullGrid& g);

}  // namespace nullwave
