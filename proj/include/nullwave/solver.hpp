#pragma once

// Characteristic marching for box phi = Q(grad phi, grad phi) in the
// reduced form d_u d_ubar psi = Delta_{S^2} psi / r^2 - r Q, psi = r phi.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/field.hpp"
#include "nullwave/geometry.hpp"
#include "nullwave/nullform.hpp"
#include "nullwave/pulse.hpp"

namespace nullwave {

class NullFormSpec {
 public:
  /// Throws std::invalid_argument when q is not admissible in the mode:
  /// spherical allows span{Q0}, axisym allows span{Q0, Q03}.
  NullFormSpec(const NullFormCoeffs& q, AngularMode mode);

  const NullFormCoeffs& q() const { return q_; }
  AngularMode mode() const { return mode_; }

  static bool admissible(const NullFormCoeffs& q, AngularMode mode);

 private:
  NullFormCoeffs q_;
  AngularMode mode_;
};

struct SolverConfig {
  int corrector_iterations = 2;
  double corrector_tol = 1e-12;
  double blowup_threshold = 1e6;
  /// Refuse grids with dubar > delta / min_ubar_cells_per_delta.
  int min_ubar_cells_per_delta = 32;
  /// When false, the resolution rule is reported but not enforced.
  bool enforce_resolution = true;

  void validate() const;
};

struct MarchStats {
  long cells = 0;
  long nonconverged_cells = 0;
  int corrector_passes_max = 0;
  /// Largest ratio of successive corrector updates over all cells.
  double max_contraction = 0.0;
  double max_abs_psi = 0.0;
  std::vector<std::string> warnings;
};

class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(int i, int j, double u, double ubar, double value);
  int i, j;
  double u, ubar, value;
};

struct FieldState {
  FieldState(const DoubleNullGrid& g);

  DoubleNullGrid grid;
  Field3 psi;
  Field3 phi;
  Field3 lphi;        // d_ubar phi
  Field3 lbarphi;     // d_u phi
  Field3 dtheta_phi;  // d_theta phi
  MarchStats stats;
  bool derived = false;

  double delta() const { return grid.delta(); }
  double u0() const { return grid.u0(); }
};

/// Q(grad phi, grad phi) from frame components; the result never
/// contains an (L phi)^2 term.
double rhs_null_form(const NullFormSpec& spec, const SpherePoint& p,
                     const FrameGradient& g);

/// Marches the Goursat problem. Throws BreakdownError at the first cell
/// with a non-finite value or |psi| above the threshold.
FieldState march(const CharacteristicData& data, const NullFormSpec& spec,
                 const DoubleNullGrid& g, const SolverConfig& cfg = {});

/// Fills phi-derived fields (phi, L phi, Lbar phi, d_theta phi).
void derive_first_derivatives(FieldState& s);

struct GuardStatus {
  bool ok = true;
  double max_abs_psi = 0.0;
  int i = -1, j = -1;
};
GuardStatus blowup_guard(const FieldState& s, double threshold);

/// Frame gradient of phi at a node from the derived fields.
FrameGradient node_gradient(const FieldState& s, int i, int j, int k);

}  // namespace nullwave
