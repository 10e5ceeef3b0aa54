#include "nullwave/nullform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace nullwave {

double minkowski_dot(const FourVector& a, const FourVector& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double minkowski_sq(const FourVector& v) { return minkowski_dot(v, v); }

double euclid_sq(const FourVector& v) {
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
}

bool is_null(const FourVector& v, double tol, double floor) {
  return std::abs(minkowski_sq(v)) <= tol * (euclid_sq(v) + floor);
}

std::string_view basis_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::Q0: return "Q0";
    case BasisKind::Q01: return "Q01";
    case BasisKind::Q02: return "Q02";
    case BasisKind::Q03: return "Q03";
    case BasisKind::Q12: return "Q12";
    case BasisKind::Q13: return "Q13";
    case BasisKind::Q23: return "Q23";
  }
  return "?";
}

int NullFormCoeffs::slot(int a, int b) {
  // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
  if (a == 0) return b - 1;
  if (a == 1) return b + 1;
  return 5;
}

double NullFormCoeffs::c(int a, int b) const {
  if (a < 0 || a > 3 || b < 0 || b > 3) throw std::out_of_range("null form index");
  if (a == b) return 0.0;
  if (a < b) return upper_[slot(a, b)];
  return -upper_[slot(b, a)];
}

void NullFormCoeffs::set_c(int a, int b, double value) {
  if (a < 0 || a > 3 || b < 0 || b > 3) throw std::out_of_range("null form index");
  if (a == b) throw std::invalid_argument("diagonal entry of an antisymmetric form");
  if (a < b)
    upper_[slot(a, b)] = value;
  else
    upper_[slot(b, a)] = -value;
}

void NullFormCoeffs::add_pair(int a, int b, double value) {
  if (a == b) return;
  set_c(a, b, c(a, b) + value);
}

double NullFormCoeffs::norm() const {
  double s = c0 * c0;
  for (double v : upper_) s += v * v;
  return std::sqrt(s);
}

bool NullFormCoeffs::is_zero() const {
  if (c0 != 0.0) return false;
  for (double v : upper_)
    if (v != 0.0) return false;
  return true;
}

NullFormCoeffs& NullFormCoeffs::operator+=(const NullFormCoeffs& o) {
  c0 += o.c0;
  for (int s = 0; s < 6; ++s) upper_[s] += o.upper_[s];
  return *this;
}

NullFormCoeffs operator*(double s, NullFormCoeffs q) {
  q.c0 *= s;
  for (double& v : q.upper_) v *= s;
  return q;
}

NullFormCoeffs basis_form(BasisKind kind) {
  NullFormCoeffs q;
  switch (kind) {
    case BasisKind::Q0: q.c0 = 1.0; break;
    case BasisKind::Q01: q.set_c(0, 1, 1.0); break;
    case BasisKind::Q02: q.set_c(0, 2, 1.0); break;
    case BasisKind::Q03: q.set_c(0, 3, 1.0); break;
    case BasisKind::Q12: q.set_c(1, 2, 1.0); break;
    case BasisKind::Q13: q.set_c(1, 3, 1.0); break;
    case BasisKind::Q23: q.set_c(2, 3, 1.0); break;
  }
  return q;
}

double evaluate_cartesian(const NullFormCoeffs& q, const FourVector& xi,
                          const FourVector& eta) {
  double v = q.c0 * minkowski_dot(xi, eta);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double cab = q.c(a, b);
      if (cab != 0.0) v += cab * (xi[a] * eta[b] - eta[a] * xi[b]);
    }
  return v;
}

SphereBasis sphere_basis(const SpherePoint& p) {
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi_az), cp = std::cos(p.phi_az);
  return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void require_positive_radius(double r) {
  if (!(r > 0.0)) throw std::domain_error("radius must be positive");
}

// Cartesian covector contributed by each unit frame derivative:
// d_a phi = sum_A dual[A][a] * (frame derivative A), A = (L, Lbar, e1, e2).
std::array<FourVector, 4> frame_duals(const SphereBasis& b) {
  const auto& w = b.radial;
  return {FourVector{0.5, 0.5 * w[0], 0.5 * w[1], 0.5 * w[2]},
          FourVector{0.5, -0.5 * w[0], -0.5 * w[1], -0.5 * w[2]},
          FourVector{0.0, b.e_theta[0], b.e_theta[1], b.e_theta[2]},
          FourVector{0.0, b.e_phi[0], b.e_phi[1], b.e_phi[2]}};
}

}  // namespace

FrameGradient to_frame(const FourVector& grad, const SpherePoint& p) {
  const SphereBasis b = sphere_basis(p);
  const std::array<double, 3> spatial{grad[1], grad[2], grad[3]};
  const double dr = dot3(b.radial, spatial);
  return {grad[0] + dr, grad[0] - dr, {dot3(b.e_theta, spatial), dot3(b.e_phi, spatial)}};
}

FourVector to_cartesian(const FrameGradient& g, const SpherePoint& p) {
  const auto duals = frame_duals(sphere_basis(p));
  const std::array<double, 4> coef{g.l, g.lbar, g.ang[0], g.ang[1]};
  FourVector out{};
  for (int A = 0; A < 4; ++A)
    for (int a = 0; a < 4; ++a) out[a] += coef[A] * duals[A][a];
  return out;
}

FrameComponents frame_components(const NullFormCoeffs& q, const SpherePoint& p) {
  require_positive_radius(p.r);
  const auto d = frame_duals(sphere_basis(p));
  auto F = [&](int A, int B) { return evaluate_cartesian(q, d[A], d[B]); };
  FrameComponents fc;
  fc.q43 = F(0, 1);
  fc.q34 = F(1, 0);
  for (int a = 0; a < 2; ++a) {
    fc.q4a[a] = F(0, 2 + a);
    fc.q3a[a] = F(1, 2 + a);
    fc.qa4[a] = F(2 + a, 0);
    fc.qa3[a] = F(2 + a, 1);
    for (int b = 0; b < 2; ++b) fc.qab[a][b] = F(2 + a, 2 + b);
  }
  return fc;
}

std::array<double, 2> frame_diagonal_null_terms(const NullFormCoeffs& q,
                                                const SpherePoint& p) {
  require_positive_radius(p.r);
  const auto d = frame_duals(sphere_basis(p));
  return {evaluate_cartesian(q, d[0], d[0]), evaluate_cartesian(q, d[1], d[1])};
}

double evaluate_frame(const FrameComponents& fc, const FrameGradient& f,
                      const FrameGradient& g) {
  double v = fc.q43 * f.l * g.lbar + fc.q34 * f.lbar * g.l;
  for (int a = 0; a < 2; ++a) {
    v += fc.q4a[a] * f.l * g.ang[a] + fc.q3a[a] * f.lbar * g.ang[a];
    v += fc.qa4[a] * f.ang[a] * g.l + fc.qa3[a] * f.ang[a] * g.lbar;
    for (int b = 0; b < 2; ++b) v += fc.qab[a][b] * f.ang[a] * g.ang[b];
  }
  return v;
}

double pointwise_bound_constant(const NullFormCoeffs& q, const SpherePoint& p) {
  const FrameComponents fc = frame_components(q, p);
  double c = std::abs(fc.q34) + std::abs(fc.q43);
  for (int a = 0; a < 2; ++a) {
    c += std::abs(fc.q4a[a]) + std::abs(fc.q3a[a]) + std::abs(fc.qa4[a]) +
         std::abs(fc.qa3[a]);
    for (int b = 0; b < 2; ++b) c += std::abs(fc.qab[a][b]);
  }
  return c;
}

double null_form_majorant(const FrameGradient& f, const FrameGradient& g) {
  const double af = std::hypot(f.ang[0], f.ang[1]);
  const double ag = std::hypot(g.ang[0], g.ang[1]);
  const double lf = std::abs(f.l), lbf = std::abs(f.lbar);
  const double lg = std::abs(g.l), lbg = std::abs(g.lbar);
  return lf * lbg + lbf * lg + af * ag + (lf + lbf) * ag + af * (lg + lbg);
}

int certify_null_dimension(int sample_count, std::uint64_t rng_seed,
                           bool symmetric_only) {
  if (sample_count < 40) throw std::invalid_argument("sample_count must be >= 40");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> amp(0.1, 10.0);

  const int cols = symmetric_only ? 10 : 16;
  Eigen::MatrixXd A(sample_count, cols);
  for (int s = 0; s < sample_count; ++s) {
    std::array<double, 3> w;
    double n2 = 0.0;
    do {
      for (double& x : w) x = unit(rng);
      n2 = dot3(w, w);
    } while (n2 < 1e-4 || n2 > 1.0);
    const double a = amp(rng), inv = 1.0 / std::sqrt(n2);
    const FourVector xi{a, a * w[0] * inv, a * w[1] * inv, a * w[2] * inv};
    int col = 0;
    for (int al = 0; al < 4; ++al) {
      if (symmetric_only) {
        for (int be = al; be < 4; ++be)
          A(s, col++) = (al == be ? 1.0 : 2.0) * xi[al] * xi[be];
      } else {
        for (int be = 0; be < 4; ++be) A(s, col++) = xi[al] * xi[be];
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * sv(0);
  int nullity = cols - static_cast<int>(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) <= cut) ++nullity;
  return nullity;
}

NullFormCoeffs rotation_commutator(const NullFormCoeffs& q, RotationPair ij) {
  const int i = ij.i, j = ij.j;
  if (i < 1 || j > 3 || i >= j) throw std::invalid_argument("rotation pair must satisfy 1 <= i < j <= 3");
  // Differentiating d_a(Omega_ij f) = Omega_ij d_a f + delta_ai d_j f - delta_aj d_i f
  // through Q_ab gives
  //   Qtilde = -(delta_ia Q_jb - delta_ja Q_ib + delta_jb Q_ia - delta_ib Q_ja).
  // Q0 is rotation invariant and contributes nothing.
  NullFormCoeffs out;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double cab = q.c(a, b);
      if (cab == 0.0) continue;
      if (i == a) out.add_pair(j, b, -cab);
      if (j == a) out.add_pair(i, b, cab);
      if (j == b) out.add_pair(i, a, -cab);
      if (i == b) out.add_pair(j, a, cab);
    }
  return out;
}

RotationValues rotation_values(const SpherePoint& p, const FrameGradient& g) {
  const SphereBasis b = sphere_basis(p);
  std::array<double, 3> x, d;
  for (int k = 0; k < 3; ++k) {
    x[k] = p.r * b.radial[k];
    d[k] = g.ang[0] * b.e_theta[k] + g.ang[1] * b.e_phi[k];
  }
  return {x[0] * d[1] - x[1] * d[0], x[0] * d[2] - x[2] * d[0],
          x[1] * d[2] - x[2] * d[1]};
}

namespace {

int rotation_slot(int i, int j) {
  if (i == 1 && j == 2) return 0;
  if (i == 1 && j == 3) return 1;
  return 2;
}

}  // namespace

double null_direction_commutator(const NullFormCoeffs& q, NullDirection dir,
                                 const SpherePoint& p, const FrameGradient& f,
                                 const FrameGradient& g,
                                 const RotationValues& omega_f,
                                 const RotationValues& omega_g) {
  require_positive_radius(p.r);
  const double r = p.r;
  const double sign = dir == NullDirection::L ? 1.0 : -1.0;
  const SphereBasis b = sphere_basis(p);

  auto basis_value = [&](BasisKind k) {
    return evaluate_frame(frame_components(basis_form(k), p), f, g);
  };

  double v = 0.0;
  if (q.c0 != 0.0) {
    // (2/r) angular dot product, i.e. (2/r)(Q0 + (L f Lb g + Lb f L g)/2)
    // under g(L, Lbar) = -2.
    const double q0 = basis_value(BasisKind::Q0);
    v += q.c0 * (2.0 / r) * (q0 + 0.5 * (f.l * g.lbar + f.lbar * g.l));
  }
  static constexpr std::array<BasisKind, 3> kTime{BasisKind::Q01, BasisKind::Q02,
                                                  BasisKind::Q03};
  for (int i = 1; i <= 3; ++i) {
    const double c0i = q.c(0, i);
    if (c0i == 0.0) continue;
    const double xi = r * b.radial[i - 1];
    v += c0i * (basis_value(kTime[i - 1]) / r -
                xi / (2.0 * r * r) * (f.lbar * g.l - f.l * g.lbar));
  }
  static constexpr std::array<BasisKind, 3> kSpace{BasisKind::Q12, BasisKind::Q13,
                                                   BasisKind::Q23};
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      const double cij = q.c(i, j);
      if (cij == 0.0) continue;
      const int s = rotation_slot(i, j);
      v += cij * ((2.0 / r) * basis_value(kSpace[s]) +
                  1.0 / (2.0 * r * r) *
                      ((f.lbar - f.l) * omega_g[s] + (g.l - g.lbar) * omega_f[s]));
    }
  return sign * v;
}

double null_direction_commutator_projector(const NullFormCoeffs& q,
                                           NullDirection dir,
                                           const SpherePoint& p,
                                           const FrameGradient& f,
                                           const FrameGradient& g) {
  const FrameComponents fc = frame_components(q, p);
  const FrameGradient pf{0.0, 0.0, f.ang};
  const FrameGradient pg{0.0, 0.0, g.ang};
  const double v = (evaluate_frame(fc, pf, g) + evaluate_frame(fc, f, pg)) / p.r;
  return dir == NullDirection::L ? v : -v;
}

}  // namespace nullwave
