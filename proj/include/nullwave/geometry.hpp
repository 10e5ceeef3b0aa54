#pragma once

// Double-null coordinates u = (t - r)/2, ubar = (t + r)/2 on the rectangle
// u in [u0, -1], ubar in [0, delta], with an optional polar angle theta.

#include <span>
#include <string_view>
#include <vector>

#include "nullwave/nullform.hpp"

namespace nullwave {

enum class AngularMode { Spherical, Axisym };

std::string_view mode_name(AngularMode m);

struct GridSpec {
  double u0 = -8.0;
  double delta = 0.05;
  int n_u = 448;
  int n_ubar = 32;
  AngularMode mode = AngularMode::Axisym;
  int n_theta = 129;
};

struct GridPoint {
  int i = 0, j = 0, k = 0;
  double u = 0.0, ubar = 0.0, r = 0.0, t = 0.0, theta = 0.0;
};

class DoubleNullGrid {
 public:
  /// Throws std::invalid_argument on u0 >= -1, delta outside (0, 1),
  /// fewer than 2 cells, or n_theta < 5 in axisym mode.
  explicit DoubleNullGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  double u0() const { return spec_.u0; }
  double u1() const { return -1.0; }
  double delta() const { return spec_.delta; }
  AngularMode mode() const { return spec_.mode; }

  int n_u() const { return spec_.n_u; }
  int n_ubar() const { return spec_.n_ubar; }
  /// Node counts along each axis (cells + 1; 1 theta node when spherical).
  int nodes_u() const { return spec_.n_u + 1; }
  int nodes_ubar() const { return spec_.n_ubar + 1; }
  int nodes_theta() const { return static_cast<int>(theta_.size()); }

  double du() const { return du_; }
  double dubar() const { return dubar_; }
  double dtheta() const { return dtheta_; }

  double u(int i) const { return spec_.u0 + i * du_; }
  double ubar(int j) const { return j * dubar_; }
  double r(int i, int j) const { return ubar(j) - u(i); }
  double t(int i, int j) const { return ubar(j) + u(i); }
  double theta(int k) const { return theta_[k]; }

  GridPoint point(int i, int j, int k) const;

  /// Trapezoid weights 2 pi sin(theta) dtheta on the unit sphere, zero at the
  /// poles. Their sum is 4 pi up to O(dtheta^2).
  const std::vector<double>& sphere_weights() const { return weights_; }

  /// Index of the u node nearest to the given value.
  int nearest_u(double u) const;

 private:
  GridSpec spec_;
  double du_ = 0.0, dubar_ = 0.0, dtheta_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> weights_;
};

struct FrameVectors {
  FourVector l;
  FourVector lbar;
  FourVector e_theta;
};

/// Contravariant components at (r, theta, azimuth 0). Throws
/// std::domain_error when r <= 0.
FrameVectors frame_vectors(const GridPoint& p);

/// Unit-sphere Laplacian as a tridiagonal operator over theta nodes.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;
};
Tridiagonal unit_sphere_laplacian(const DoubleNullGrid& g);

/// (1/r^2) Delta_{S^2} f, conservative second-order differences with
/// regular pole rows. Zero in spherical mode.
void angular_laplacian(const DoubleNullGrid& g, std::span<const double> f, double r,
                       std::span<double> out);

/// (1/r^2) (d_theta f)^2.
void angular_gradient_sq(const DoubleNullGrid& g, std::span<const double> f,
                         double r, std::span<double> out);

/// d^order f / d theta^order at node k, order in 1..3, using even
/// reflection across both poles. Zero in spherical mode.
double theta_derivative(const DoubleNullGrid& g, std::span<const double> f, int k,
                        int order);

/// r^2 * sum_k w_k f_k.
double sphere_integral(const DoubleNullGrid& g, std::span<const double> f, double r);

/// Second-order first and second derivatives of a sampled 1-d function
/// g(0..n-1) with spacing h: centered inside, one-sided at the ends.
template <class G>
double diff1(G&& g, int idx, int n, double h) {
  if (idx == 0) return (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h);
  if (idx == n - 1) return (3.0 * g(n - 1) - 4.0 * g(n - 2) + g(n - 3)) / (2.0 * h);
  return (g(idx + 1) - g(idx - 1)) / (2.0 * h);
}

template <class G>
double diff2(G&& g, int idx, int n, double h) {
  const double h2 = h * h;
  if (n < 4) return (g(0) - 2.0 * g(1) + g(2)) / h2;
  if (idx == 0) return (2.0 * g(0) - 5.0 * g(1) + 4.0 * g(2) - g(3)) / h2;
  if (idx == n - 1)
    return (2.0 * g(n - 1) - 5.0 * g(n - 2) + 4.0 * g(n - 3) - g(n - 4)) / h2;
  return (g(idx + 1) - 2.0 * g(idx) + g(idx - 1)) / h2;
}

/// Trapezoid rule over 0..n-1.
template <class G>
double trapezoid(G&& g, int n, double h) {
  if (n < 2) return 0.0;
  double s = 0.5 * (g(0) + g(n - 1));
  for (int m = 1; m < n - 1; ++m) s += g(m);
  return s * h;
}

/// Integral over C_u (u = u(i)) restricted to ubar in [0, ubar(j_end)]:
/// int sphere_integral(density(j, .), r(i, j)) dubar.
/// density(j, k) gives the integrand at theta node k.
template <class Density>
double flux_integral_C_u(const DoubleNullGrid& g, int i, Density&& density,
                         int j_end = -1) {
  if (j_end < 0) j_end = g.n_ubar();
  const auto& w = g.sphere_weights();
  auto slice = [&](int j) {
    double s = 0.0;
    for (int k = 0; k < g.nodes_theta(); ++k) s += w[k] * density(j, k);
    const double r = g.r(i, j);
    return s * r * r;
  };
  return trapezoid(slice, j_end + 1, g.dubar());
}

/// Integral over Cbar_ubar (ubar = ubar(j)) restricted to u in [u0, u(i_end)].
template <class Density>
double flux_integral_Cbar(const DoubleNullGrid& g, int j, Density&& density,
                          int i_end = -1) {
  if (i_end < 0) i_end = g.n_u();
  const auto& w = g.sphere_weights();
  auto slice = [&](int i) {
    double s = 0.0;
    for (int k = 0; k < g.nodes_theta(); ++k) s += w[k] * density(i, k);
    const double r = g.r(i, j);
    return s * r * r;
  };
  return trapezoid(slice, i_end + 1, g.du());
}

}  // namespace nullwave
