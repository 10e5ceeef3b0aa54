#include "nullwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nullwave {

bool NullFormSpec::admissible(const NullFormCoeffs& q, AngularMode mode) {
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      if (q.c(a, b) == 0.0) continue;
      if (mode == AngularMode::Axisym && a == 0 && b == 3) continue;
      return false;
    }
  return true;
}

NullFormSpec::NullFormSpec(const NullFormCoeffs& q, AngularMode mode)
    : q_(q), mode_(mode) {
  if (!admissible(q, mode))
    throw std::invalid_argument("null form not admissible in " +
                                std::string(mode_name(mode)) + " mode");
}

void SolverConfig::validate() const {
  if (corrector_iterations < 1)
    throw std::invalid_argument("corrector_iterations must be >= 1");
  if (!(corrector_tol > 0.0)) throw std::invalid_argument("corrector_tol must be positive");
  if (!(blowup_threshold > 0.0))
    throw std::invalid_argument("blowup_threshold must be positive");
  if (min_ubar_cells_per_delta < 1)
    throw std::invalid_argument("min_ubar_cells_per_delta must be >= 1");
}

namespace {

std::string breakdown_message(int i, int j, double u, double ubar, double value) {
  std::ostringstream os;
  os << "breakdown at cell (" << i << ", " << j << "), u = " << u
     << ", ubar = " << ubar << ", |psi| = " << value;
  return os.str();
}

}  // namespace

BreakdownError::BreakdownError(int i_, int j_, double u_, double ubar_, double value_)
    : std::runtime_error(breakdown_message(i_, j_, u_, ubar_, value_)),
      i(i_), j(j_), u(u_), ubar(ubar_), value(value_) {}

FieldState::FieldState(const DoubleNullGrid& g)
    : grid(g), psi(g.nodes_u(), g.nodes_ubar(), g.nodes_theta()) {}

double rhs_null_form(const NullFormSpec& spec, const SpherePoint& p,
                     const FrameGradient& g) {
  return evaluate_frame(frame_components(spec.q(), p), g, g);
}

namespace {

// Solves (I - kappa T) x = rhs in place.
void solve_shifted(const Tridiagonal& t, double kappa, std::vector<double>& rhs,
                   std::vector<double>& cprime) {
  const int n = static_cast<int>(rhs.size());
  if (n == 1) return;
  double b = 1.0 - kappa * t.diag[0];
  cprime[0] = -kappa * t.upper[0] / b;
  rhs[0] /= b;
  for (int k = 1; k < n; ++k) {
    const double a = -kappa * t.lower[k];
    b = 1.0 - kappa * t.diag[k] - a * cprime[k - 1];
    cprime[k] = k + 1 < n ? -kappa * t.upper[k] / b : 0.0;
    rhs[k] = (rhs[k] - a * rhs[k - 1]) / b;
  }
  for (int k = n - 2; k >= 0; --k) rhs[k] -= cprime[k] * rhs[k + 1];
}

void apply(const Tridiagonal& t, std::span<const double> f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  if (n == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = t.diag[0] * f[0] + t.upper[0] * f[1];
  out[n - 1] = t.lower[n - 1] * f[n - 2] + t.diag[n - 1] * f[n - 1];
  for (int k = 1; k < n - 1; ++k)
    out[k] = t.upper[k] * (f[k + 1] - f[k]) - t.lower[k] * (f[k] - f[k - 1]);
}

}  // namespace

FieldState march(const CharacteristicData& data, const NullFormSpec& spec,
                 const DoubleNullGrid& g, const SolverConfig& cfg) {
  cfg.validate();
  if (spec.mode() != g.mode())
    throw std::invalid_argument("null form spec and grid disagree on angular mode");
  if (data.nodes_ubar != g.nodes_ubar() || data.nodes_theta != g.nodes_theta() ||
      data.delta != g.delta() || data.u0 != g.u0())
    throw std::invalid_argument("characteristic data does not match the grid");
  const double rule = g.delta() / cfg.min_ubar_cells_per_delta;
  FieldState s(g);
  if (g.dubar() > rule * (1.0 + 1e-12)) {
    if (cfg.enforce_resolution)
      throw std::invalid_argument("ubar step exceeds delta / " +
                                  std::to_string(cfg.min_ubar_cells_per_delta));
    s.stats.warnings.push_back("ubar step coarser than the resolution rule");
  }

  const int nth = g.nodes_theta();
  for (int j = 0; j < g.nodes_ubar(); ++j)
    for (int k = 0; k < nth; ++k) s.psi(0, j, k) = g.r(0, j) * data.at(j, k);

  const bool nonlinear = !spec.q().is_zero();
  std::vector<FrameComponents> fc(nth);
  for (int k = 0; k < nth; ++k) fc[k] = frame_components(spec.q(), {1.0, g.theta(k), 0.0});

  const Tridiagonal T = unit_sphere_laplacian(g);
  const double du = g.du(), dub = g.dubar(), area = du * dub;
  std::vector<double> sum(nth), lap(nth), base(nth), cur(nth), next(nth), cp(nth),
      phic(nth), qv(nth);

  MarchStats& st = s.stats;
  for (int i = 0; i < g.n_u(); ++i) {
    for (int j = 0; j < g.n_ubar(); ++j) {
      auto A = s.psi.row(i, j);
      auto B = s.psi.row(i + 1, j);
      auto C = s.psi.row(i, j + 1);
      auto D = s.psi.row(i + 1, j + 1);
      const double rA = g.r(i, j), rB = g.r(i + 1, j), rC = g.r(i, j + 1),
                   rD = g.r(i + 1, j + 1);
      const double rc = 0.25 * (rA + rB + rC + rD);
      const double kappa = area / (4.0 * rc * rc);

      for (int k = 0; k < nth; ++k) sum[k] = A[k] + B[k] + C[k];
      apply(T, sum, lap);
      for (int k = 0; k < nth; ++k) {
        cur[k] = B[k] + C[k] - A[k];
        base[k] = cur[k] + kappa * lap[k];
      }

      const int passes = nonlinear ? cfg.corrector_iterations : 1;
      double prev_change = 0.0, change = 0.0;
      for (int p = 0; p < passes; ++p) {
        if (nonlinear) {
          for (int k = 0; k < nth; ++k)
            phic[k] = 0.25 * (A[k] / rA + B[k] / rB + C[k] / rC + cur[k] / rD);
          for (int k = 0; k < nth; ++k) {
            FrameGradient gr;
            gr.l = ((C[k] / rC + cur[k] / rD) - (A[k] / rA + B[k] / rB)) / (2.0 * dub);
            gr.lbar = ((B[k] / rB + cur[k] / rD) - (A[k] / rA + C[k] / rC)) / (2.0 * du);
            gr.ang[0] = theta_derivative(g, phic, k, 1) / rc;
            qv[k] = evaluate_frame(fc[k], gr, gr);
          }
          for (int k = 0; k < nth; ++k) next[k] = base[k] - area * rc * qv[k];
        } else {
          next = base;
        }
        solve_shifted(T, kappa, next, cp);
        prev_change = change;
        change = 0.0;
        double scale = 1.0;
        for (int k = 0; k < nth; ++k) {
          change = std::max(change, std::abs(next[k] - cur[k]));
          scale = std::max(scale, std::abs(next[k]));
        }
        std::swap(cur, next);
        if (p > 0 && prev_change > 0.0)
          st.max_contraction = std::max(st.max_contraction, change / prev_change);
        st.corrector_passes_max = std::max(st.corrector_passes_max, p + 1);
        if (nonlinear && p > 0 && change <= cfg.corrector_tol * scale) break;
        if (nonlinear && p + 1 == passes && change > cfg.corrector_tol * scale)
          ++st.nonconverged_cells;
      }

      for (int k = 0; k < nth; ++k) {
        const double v = cur[k];
        if (!std::isfinite(v) || std::abs(v) > cfg.blowup_threshold)
          throw BreakdownError(i + 1, j + 1, g.u(i + 1), g.ubar(j + 1), std::abs(v));
        D[k] = v;
        st.max_abs_psi = std::max(st.max_abs_psi, std::abs(v));
      }
      ++st.cells;
    }
  }
  if (st.nonconverged_cells > 0)
    st.warnings.push_back("corrector above tolerance after " +
                          std::to_string(cfg.corrector_iterations) + " passes in " +
                          std::to_string(st.nonconverged_cells) + " cells");
  if (st.max_contraction > 0.5)
    st.warnings.push_back("corrector contraction ratio " +
                          std::to_string(st.max_contraction) + " exceeds 0.5");
  derive_first_derivatives(s);
  return s;
}

void derive_first_derivatives(FieldState& s) {
  const DoubleNullGrid& g = s.grid;
  const int nu = g.nodes_u(), nub = g.nodes_ubar(), nth = g.nodes_theta();
  s.phi = Field3(nu, nub, nth);
  s.lphi = Field3(nu, nub, nth);
  s.lbarphi = Field3(nu, nub, nth);
  s.dtheta_phi = Field3(nu, nub, nth);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nub; ++j)
      for (int k = 0; k < nth; ++k) s.phi(i, j, k) = s.psi(i, j, k) / g.r(i, j);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nub; ++j) {
      auto row = s.phi.row(i, j);
      for (int k = 0; k < nth; ++k) {
        s.lphi(i, j, k) = diff1([&](int m) { return s.phi(i, m, k); }, j, nub, g.dubar());
        s.lbarphi(i, j, k) = diff1([&](int m) { return s.phi(m, j, k); }, i, nu, g.du());
        s.dtheta_phi(i, j, k) = theta_derivative(g, row, k, 1);
      }
    }
  s.derived = true;
}

GuardStatus blowup_guard(const FieldState& s, double threshold) {
  GuardStatus out;
  const DoubleNullGrid& g = s.grid;
  for (int i = 0; i < g.nodes_u(); ++i)
    for (int j = 0; j < g.nodes_ubar(); ++j)
      for (int k = 0; k < g.nodes_theta(); ++k) {
        const double v = s.psi(i, j, k);
        const double a = std::isfinite(v) ? std::abs(v) : INFINITY;
        if (a > out.max_abs_psi) out.max_abs_psi = a;
        if (out.ok && a > threshold) {
          out.ok = false;
          out.i = i;
          out.j = j;
        }
      }
  return out;
}

FrameGradient node_gradient(const FieldState& s, int i, int j, int k) {
  const double r = s.grid.r(i, j);
  return {s.lphi(i, j, k), s.lbarphi(i, j, k), {s.dtheta_phi(i, j, k) / r, 0.0}};
}

}  // namespace nullwave
