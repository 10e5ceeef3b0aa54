#include "nullwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nullwave {

std::string_view mode_name(AngularMode m) {
  return m == AngularMode::Spherical ? "spherical" : "axisym";
}

DoubleNullGrid::DoubleNullGrid(const GridSpec& spec) : spec_(spec) {
  if (!(spec.u0 < -1.0)) throw std::invalid_argument("u0 must be < -1");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (spec.n_u < 2 || spec.n_ubar < 2)
    throw std::invalid_argument("n_u and n_ubar must be >= 2");
  du_ = (-1.0 - spec.u0) / spec.n_u;
  dubar_ = spec.delta / spec.n_ubar;

  constexpr double pi = std::numbers::pi;
  if (spec.mode == AngularMode::Spherical) {
    theta_ = {0.0};
    weights_ = {4.0 * pi};
    return;
  }
  if (spec.n_theta < 5)
    throw std::invalid_argument("n_theta must be >= 5 in axisym mode");
  dtheta_ = pi / (spec.n_theta - 1);
  theta_.resize(spec.n_theta);
  weights_.resize(spec.n_theta);
  for (int k = 0; k < spec.n_theta; ++k) {
    theta_[k] = k * dtheta_;
    weights_[k] = 2.0 * pi * std::sin(theta_[k]) * dtheta_;
  }
  weights_.front() = weights_.back() = 0.0;
}

GridPoint DoubleNullGrid::point(int i, int j, int k) const {
  return {i, j, k, u(i), ubar(j), r(i, j), t(i, j), theta(k)};
}

int DoubleNullGrid::nearest_u(double uv) const {
  const long idx = std::lround((uv - spec_.u0) / du_);
  return static_cast<int>(std::clamp<long>(idx, 0, spec_.n_u));
}

FrameVectors frame_vectors(const GridPoint& p) {
  if (!(p.r > 0.0)) throw std::domain_error("radius must be positive");
  const SphereBasis b = sphere_basis({p.r, p.theta, 0.0});
  const auto& w = b.radial;
  return {{1.0, w[0], w[1], w[2]},
          {1.0, -w[0], -w[1], -w[2]},
          {0.0, b.e_theta[0], b.e_theta[1], b.e_theta[2]}};
}

Tridiagonal unit_sphere_laplacian(const DoubleNullGrid& g) {
  const int n = g.nodes_theta();
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0)};
  if (g.mode() == AngularMode::Spherical) return t;
  const double h = g.dtheta(), h2 = h * h;
  t.diag[0] = -4.0 / h2;
  t.upper[0] = 4.0 / h2;
  t.diag[n - 1] = -4.0 / h2;
  t.lower[n - 1] = 4.0 / h2;
  for (int k = 1; k < n - 1; ++k) {
    const double th = g.theta(k);
    const double sp = std::sin(th + 0.5 * h), sm = std::sin(th - 0.5 * h);
    const double inv = 1.0 / (std::sin(th) * h2);
    t.lower[k] = sm * inv;
    t.upper[k] = sp * inv;
    t.diag[k] = -(sp + sm) * inv;
  }
  return t;
}

void angular_laplacian(const DoubleNullGrid& g, std::span<const double> f, double r,
                       std::span<double> out) {
  const int n = g.nodes_theta();
  if (g.mode() == AngularMode::Spherical) {
    out[0] = 0.0;
    return;
  }
  const Tridiagonal t = unit_sphere_laplacian(g);
  const double s = 1.0 / (r * r);
  out[0] = s * (t.diag[0] * f[0] + t.upper[0] * f[1]);
  out[n - 1] = s * (t.lower[n - 1] * f[n - 2] + t.diag[n - 1] * f[n - 1]);
  for (int k = 1; k < n - 1; ++k) {
    out[k] = s * (t.upper[k] * (f[k + 1] - f[k]) - t.lower[k] * (f[k] - f[k - 1]));
  }
}

void angular_gradient_sq(const DoubleNullGrid& g, std::span<const double> f,
                         double r, std::span<double> out) {
  const int n = g.nodes_theta();
  for (int k = 0; k < n; ++k) {
    const double d = theta_derivative(g, f, k, 1);
    out[k] = d * d / (r * r);
  }
}

double theta_derivative(const DoubleNullGrid& g, std::span<const double> f, int k,
                        int order) {
  if (g.mode() == AngularMode::Spherical) return 0.0;
  const int last = g.nodes_theta() - 1;
  auto at = [&](int m) {
    if (m < 0) m = -m;
    if (m > last) m = 2 * last - m;
    return f[m];
  };
  const double h = g.dtheta();
  switch (order) {
    case 1: return (at(k + 1) - at(k - 1)) / (2.0 * h);
    case 2: return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h);
    case 3:
      return (at(k + 2) - 2.0 * at(k + 1) + 2.0 * at(k - 1) - at(k - 2)) /
             (2.0 * h * h * h);
    default: throw std::invalid_argument("theta derivative order must be 1..3");
  }
}

double sphere_integral(const DoubleNullGrid& g, std::span<const double> f, double r) {
  const auto& w = g.sphere_weights();
  double s = 0.0;
  for (int k = 0; k < g.nodes_theta(); ++k) s += w[k] * f[k];
  return s * r * r;
}

}  // namespace nullwave
