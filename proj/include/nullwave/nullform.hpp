#pragma once

// Null quadratic forms on R^{3+1}.
//
// Conventions: metric signature (-,+,+,+), coordinates (t, x1, x2, x3),
// L = d_t + d_r, Lbar = d_t - d_r, so g(L, Lbar) = -2. A quadratic form
// acting on gradients is Q(grad phi, grad psi) = Q^{ab} d_a phi d_b psi; the
// FourVector arguments below hold covector components d_a phi.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace nullwave {

using FourVector = std::array<double, 4>;

double minkowski_dot(const FourVector& a, const FourVector& b);
double minkowski_sq(const FourVector& v);
double euclid_sq(const FourVector& v);

/// |minkowski_sq(v)| <= tol * (|v|_euclid^2 + floor).
bool is_null(const FourVector& v, double tol = 1e-10, double floor = 1e-300);

enum class BasisKind { Q0, Q01, Q02, Q03, Q12, Q13, Q23 };

inline constexpr std::array<BasisKind, 7> kAllBasisKinds = {
    BasisKind::Q0,  BasisKind::Q01, BasisKind::Q02, BasisKind::Q03,
    BasisKind::Q12, BasisKind::Q13, BasisKind::Q23};

std::string_view basis_name(BasisKind kind);

/// Coordinates of a null form in the basis {Q0, Q_ab (a<b)}.
///
/// Only the six upper-triangular entries of the antisymmetric part are
/// stored, so antisymmetry holds by construction.
class NullFormCoeffs {
 public:
  double c0 = 0.0;

  /// c[a][b]; returns -c[b][a] for a > b and 0 on the diagonal.
  double c(int a, int b) const;
  /// Sets c[a][b] (and implicitly c[b][a] = -value). Throws on a == b.
  void set_c(int a, int b, double value);
  /// Adds value * Q_ab, accepting either index order and ignoring a == b.
  void add_pair(int a, int b, double value);

  /// Euclidean norm of the 7 coordinates.
  double norm() const;
  bool is_zero() const;

  NullFormCoeffs& operator+=(const NullFormCoeffs& o);
  friend NullFormCoeffs operator+(NullFormCoeffs a, const NullFormCoeffs& b) {
    return a += b;
  }
  friend NullFormCoeffs operator*(double s, NullFormCoeffs q);
  friend bool operator==(const NullFormCoeffs&, const NullFormCoeffs&) = default;

  const std::array<double, 6>& upper() const { return upper_; }

 private:
  static int slot(int a, int b);  // a < b
  std::array<double, 6> upper_{};
};

NullFormCoeffs basis_form(BasisKind kind);

/// c0 * g(xi, eta) + sum_{a<b} c[a][b] (xi_a eta_b - eta_a xi_b).
double evaluate_cartesian(const NullFormCoeffs& q, const FourVector& xi,
                          const FourVector& eta);

/// Point on a sphere of radius r, polar angle theta, azimuth phi_az.
struct SpherePoint {
  double r = 1.0;
  double theta = 0.0;
  double phi_az = 0.0;
};

/// Unit radial direction and orthonormal tangent directions (e_theta,
/// e_phi) at a point, as spatial 3-vectors.
struct SphereBasis {
  std::array<double, 3> radial;
  std::array<double, 3> e_theta;
  std::array<double, 3> e_phi;
};
SphereBasis sphere_basis(const SpherePoint& p);

/// Derivatives of a scalar along the null frame: (L phi, Lbar phi, e_a phi).
struct FrameGradient {
  double l = 0.0;
  double lbar = 0.0;
  std::array<double, 2> ang{};
};

/// Cartesian covector <-> null-frame derivatives at a point.
FrameGradient to_frame(const FourVector& grad, const SpherePoint& p);
FourVector to_cartesian(const FrameGradient& g, const SpherePoint& p);

/// Components of a null form in the frame {e1, e2, e3 = Lbar, e4 = L}.
///
/// q43 multiplies (L phi)(Lbar psi), q34 multiplies (Lbar phi)(L psi),
/// q4a multiplies (L phi)(e_a psi), and so on. There are no slots for the
/// (L phi)(L psi) and (Lbar phi)(Lbar psi) products: for a null form they
/// vanish identically.
struct FrameComponents {
  double q34 = 0.0;
  double q43 = 0.0;
  std::array<double, 2> q4a{};
  std::array<double, 2> q3a{};
  std::array<double, 2> qa4{};
  std::array<double, 2> qa3{};
  std::array<std::array<double, 2>, 2> qab{};
};

/// Throws std::domain_error when r <= 0.
FrameComponents frame_components(const NullFormCoeffs& q, const SpherePoint& p);

/// The L(x)L and Lbar(x)Lbar contractions that frame_components drops.
/// Exposed so tests can confirm they vanish.
std::array<double, 2> frame_diagonal_null_terms(const NullFormCoeffs& q,
                                                const SpherePoint& p);

double evaluate_frame(const FrameComponents& fc, const FrameGradient& gphi,
                      const FrameGradient& gpsi);

/// Sum of |component| over all frame components. Bounds
/// |Q(grad phi, grad psi)| by that constant times the pointwise null-form
/// majorant (see null_form_majorant).
double pointwise_bound_constant(const NullFormCoeffs& q, const SpherePoint& p);

/// |L f||Lb g| + |Lb f||L g| + |D f||D g| + (|L f| + |Lb f|)|D g|
///   + |D f|(|L g| + |Lb g|), with D the angular gradient.
double null_form_majorant(const FrameGradient& gphi, const FrameGradient& gpsi);

/// Nullspace dimension of {B(xi, xi) = 0 for sampled null xi} over generic
/// bilinear forms B (16 dof), or over symmetric ones only (10 dof).
int certify_null_dimension(int sample_count, std::uint64_t rng_seed,
                           bool symmetric_only = false);

/// Rotation generator Omega_ij = x_i d_j - x_j d_i, 1 <= i < j <= 3.
struct RotationPair {
  int i = 1;
  int j = 2;
};

/// Qtilde with Omega Q(grad f, grad g) = Q(grad Omega f, grad g)
///   + Q(grad f, grad Omega g) + Qtilde(grad f, grad g).
/// Throws std::invalid_argument for an invalid pair.
NullFormCoeffs rotation_commutator(const NullFormCoeffs& q, RotationPair ij);

enum class NullDirection { L, Lbar };

/// Values of Omega_12, Omega_13, Omega_23 applied to a scalar at a point.
using RotationValues = std::array<double, 3>;

/// Omega_ij f from the angular gradient of f (radial parts cancel).
RotationValues rotation_values(const SpherePoint& p, const FrameGradient& g);

/// [X, Q](grad f, grad g) = Q(grad Xf, grad g) + Q(grad f, grad Xg)
///   - X(Q(grad f, grad g)), for X in {L, Lbar}, evaluated from the
/// closed-form expression of each basis form and extended linearly.
double null_direction_commutator(const NullFormCoeffs& q, NullDirection dir,
                                 const SpherePoint& p, const FrameGradient& gphi,
                                 const FrameGradient& gpsi,
                                 const RotationValues& omega_phi,
                                 const RotationValues& omega_psi);

/// Same commutator from the projector identity
/// [L, Q] = (1/r)(Q(P grad f, grad g) + Q(grad f, P grad g)), P the
/// projection onto the sphere tangent space; [Lbar, Q] = -[L, Q].
double null_direction_commutator_projector(const NullFormCoeffs& q,
                                           NullDirection dir,
                                           const SpherePoint& p,
                                           const FrameGradient& gphi,
                                           const FrameGradient& gpsi);

}  // namespace nullwave
