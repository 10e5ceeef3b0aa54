#include "nullwave/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nullwave {

double bump(double s) { return bump_derivative(s, 0); }

double bump_derivative(double s, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("bump derivative order must be 0..3");
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  const double p = s * (1.0 - s);
  const double p1 = 1.0 - 2.0 * s;
  const double p2 = -2.0;
  const double b = std::exp(4.0 - 1.0 / p);
  if (order == 0) return b;
  const double g1 = p1 / (p * p);
  if (order == 1) return g1 * b;
  const double g2 = p2 / (p * p) - 2.0 * p1 * p1 / (p * p * p);
  if (order == 2) return (g2 + g1 * g1) * b;
  const double g3 = -6.0 * p1 * p2 / (p * p * p) + 6.0 * p1 * p1 * p1 / (p * p * p * p);
  return (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * b;
}

double cap_profile(double x, int order) {
  return bump_derivative(0.5 * (1.0 + x), order) / std::pow(2.0, order);
}

double PulseProfile::cap_radius_at(double delta) const {
  switch (cap_mode) {
    case CapMode::Fixed: return cap_radius;
    case CapMode::SqrtDelta: return std::sqrt(delta);
    case CapMode::None: return std::numbers::pi;
  }
  return std::numbers::pi;
}

double PulseProfile::psi0(double s, double theta, double delta, int ks, int kt) const {
  const double sb = bump_derivative(s, ks);
  if (sb == 0.0) return 0.0;
  if (cap_mode == CapMode::None) return kt == 0 ? amplitude * sb : 0.0;
  const double c = cap_radius_at(delta);
  return amplitude * sb * cap_profile(theta / c, kt) / std::pow(c, kt);
}

namespace {

void check_profile(const PulseProfile& p, const DoubleNullGrid& g) {
  if (!(p.amplitude >= 0.0)) throw std::invalid_argument("amplitude must be non-negative");
  if (g.mode() == AngularMode::Spherical) {
    if (p.cap_mode != CapMode::None)
      throw std::invalid_argument("an angular cap requires axisym mode");
    return;
  }
  if (p.cap_mode == CapMode::None) return;
  const double c = p.cap_radius_at(g.delta());
  if (!(c > 0.0 && c <= std::numbers::pi))
    throw std::invalid_argument("cap radius must lie in (0, pi]");
  const double nodes = c / g.dtheta();
  if (nodes < 8.0)
    throw ResolutionError("cap radius " + std::to_string(c) + " spans " +
                          std::to_string(nodes) + " theta nodes, need >= 8");
}

}  // namespace

CharacteristicData build_data(const PulseProfile& profile, const DoubleNullGrid& g) {
  check_profile(profile, g);
  CharacteristicData d;
  d.delta = g.delta();
  d.u0 = g.u0();
  d.nodes_ubar = g.nodes_ubar();
  d.nodes_theta = g.nodes_theta();
  d.phi_on_Cu0.resize(static_cast<std::size_t>(d.nodes_ubar) * d.nodes_theta);
  const double scale = std::sqrt(g.delta()) / std::abs(g.u0());
  for (int j = 0; j < d.nodes_ubar; ++j)
    for (int k = 0; k < d.nodes_theta; ++k)
      d.phi_on_Cu0[j * d.nodes_theta + k] =
          scale * profile.psi0(g.ubar(j) / g.delta(), g.theta(k), g.delta());
  return d;
}

double data_ubar_derivative(const PulseProfile& profile, const DoubleNullGrid& g,
                            int j, int k, int order) {
  const double delta = g.delta();
  return std::pow(delta, 0.5 - order) / std::abs(g.u0()) *
         profile.psi0(g.ubar(j) / delta, g.theta(k), delta, order, 0);
}

double data_flux_L(const PulseProfile& profile, const DoubleNullGrid& g) {
  return flux_integral_C_u(g, 0, [&](int j, int k) {
    const double l = data_ubar_derivative(profile, g, j, k, 1);
    return l * l;
  });
}

PulseProfile calibrate_amplitude(const PulseProfile& profile, double E0,
                                 const DoubleNullGrid& g) {
  if (!(E0 > 0.0)) throw std::invalid_argument("target energy must be positive");
  PulseProfile out = profile;
  const double flux = data_flux_L(profile, g);
  if (!(flux > 0.0)) throw std::invalid_argument("profile has zero flux");
  out.amplitude = profile.amplitude * std::sqrt(E0 / flux);
  out.target_energy = E0;
  return out;
}

std::vector<DataScalingRow> data_scaling_table(const PulseProfile& profile,
                                               const std::vector<double>& deltas,
                                               const GridSpec& base, int k_max) {
  if (k_max < 1 || k_max > 3) throw std::invalid_argument("k_max must be 1..3");
  std::vector<DataScalingRow> rows;
  for (int k = 1; k <= k_max; ++k)
    for (double delta : deltas) {
      GridSpec spec = base;
      spec.delta = delta;
      const DoubleNullGrid g(spec);
      const double sq = flux_integral_C_u(g, 0, [&](int j, int kk) {
        const double v = data_ubar_derivative(profile, g, j, kk, k);
        return v * v;
      });
      rows.push_back({k, delta, std::sqrt(sq)});
    }
  return rows;
}

DataSupNorms data_sup_norms(const PulseProfile& profile, const DoubleNullGrid& g) {
  DataSupNorms s;
  const double delta = g.delta();
  const double scale = std::sqrt(delta) / std::abs(g.u0());
  for (int j = 0; j < g.nodes_ubar(); ++j)
    for (int k = 0; k < g.nodes_theta(); ++k) {
      s.lphi = std::max(s.lphi, std::abs(data_ubar_derivative(profile, g, j, k, 1)));
      const double dth = scale * profile.psi0(g.ubar(j) / delta, g.theta(k), delta, 0, 1);
      s.ang_phi = std::max(s.ang_phi, std::abs(dth) / g.r(0, j));
    }
  return s;
}

}  // namespace nullwave
