#include "nullwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nullwave {

namespace {

double th(const FieldState& s, int i, int j, int k, int m) {
  if (m == 0) return s.phi(i, j, k);
  return theta_derivative(s.grid, s.phi.row(i, j), k, m);
}

// d_ubar^p d_theta^m phi
double dub(const FieldState& s, int i, int j, int k, int m, int p) {
  const DoubleNullGrid& g = s.grid;
  if (p == 1 && m == 0) return s.lphi(i, j, k);
  auto f = [&](int jj) { return th(s, i, jj, k, m); };
  return p == 1 ? diff1(f, j, g.nodes_ubar(), g.dubar())
                : diff2(f, j, g.nodes_ubar(), g.dubar());
}

// d_u^p d_theta^m phi
double duu(const FieldState& s, int i, int j, int k, int m, int p) {
  const DoubleNullGrid& g = s.grid;
  if (p == 1 && m == 0) return s.lbarphi(i, j, k);
  auto f = [&](int ii) { return th(s, ii, j, k, m); };
  return p == 1 ? diff1(f, i, g.nodes_u(), g.du()) : diff2(f, i, g.nodes_u(), g.du());
}

template <class V>
double norm_Cu(const FieldState& s, int i, int j_end, V&& value) {
  return std::sqrt(flux_integral_C_u(
      s.grid, i,
      [&](int j, int k) {
        const double v = value(j, k);
        return v * v;
      },
      j_end));
}

template <class V>
double norm_Cbar(const FieldState& s, int j, int i_end, V&& value) {
  return std::sqrt(flux_integral_Cbar(
      s.grid, j,
      [&](int i, int k) {
        const double v = value(i, k);
        return v * v;
      },
      i_end));
}

void require_derived(const FieldState& s) {
  if (!s.derived) throw std::logic_error("field derivatives have not been derived");
}

std::vector<FrameComponents> frame_table(const NullFormSpec& spec,
                                         const DoubleNullGrid& g) {
  std::vector<FrameComponents> fc(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k)
    fc[k] = frame_components(spec.q(), {1.0, g.theta(k), 0.0});
  return fc;
}

}  // namespace

StressComponents stress(const FieldState& s) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  StressComponents out{Field3(g.nodes_u(), g.nodes_ubar(), g.nodes_theta()),
                       Field3(g.nodes_u(), g.nodes_ubar(), g.nodes_theta()),
                       Field3(g.nodes_u(), g.nodes_ubar(), g.nodes_theta())};
  for (int i = 0; i < g.nodes_u(); ++i)
    for (int j = 0; j < g.nodes_ubar(); ++j) {
      const double r = g.r(i, j);
      for (int k = 0; k < g.nodes_theta(); ++k) {
        const double l = s.lphi(i, j, k), lb = s.lbarphi(i, j, k);
        const double a = s.dtheta_phi(i, j, k) / r;
        out.t_ll(i, j, k) = l * l;
        out.t_llbar(i, j, k) = a * a;
        out.t_lbarlbar(i, j, k) = lb * lb;
      }
    }
  return out;
}

EnergyNorms energy_norms(const FieldState& s, int i, int j) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  const double u = std::abs(g.u(i));
  const double d = g.delta();
  const double dm = 1.0 / std::sqrt(d);
  auto r = [&](int ii, int jj) { return g.r(ii, jj); };

  const double nL = norm_Cu(s, i, j, [&](int jj, int k) { return s.lphi(i, jj, k); });
  const double nA1 = norm_Cu(s, i, j, [&](int jj, int k) {
    return s.dtheta_phi(i, jj, k) / r(i, jj);
  });
  const double nLA1 = norm_Cu(s, i, j, [&](int jj, int k) {
    return dub(s, i, jj, k, 1, 1) / r(i, jj);
  });
  const double nA2 = norm_Cu(s, i, j, [&](int jj, int k) {
    return th(s, i, jj, k, 2) / std::pow(r(i, jj), 2);
  });
  const double nLA2 = norm_Cu(s, i, j, [&](int jj, int k) {
    return dub(s, i, jj, k, 2, 1) / std::pow(r(i, jj), 2);
  });
  const double nA3 = norm_Cu(s, i, j, [&](int jj, int k) {
    return th(s, i, jj, k, 3) / std::pow(r(i, jj), 3);
  });
  const double nLL = norm_Cu(s, i, j, [&](int jj, int k) { return dub(s, i, jj, k, 0, 2); });
  const double nLLA1 = norm_Cu(s, i, j, [&](int jj, int k) {
    return dub(s, i, jj, k, 1, 2) / r(i, jj);
  });

  EnergyNorms e;
  e.E[0] = nL + dm * std::sqrt(u) * nA1;
  e.E[1] = u * nLA1 + dm * std::pow(u, 1.5) * nA2;
  e.E[2] = u * u * nLA2 + dm * std::pow(u, 2.5) * nA3;
  e.F[0] = d * nLL;
  e.F[1] = d * u * nLLA1;

  auto au = [&](int ii) { return std::abs(g.u(ii)); };
  const double bA1 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return s.dtheta_phi(ii, j, k) / r(ii, j);
  });
  const double bLb = norm_Cbar(s, j, i, [&](int ii, int k) { return s.lbarphi(ii, j, k); });
  const double bA2 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return au(ii) * th(s, ii, j, k, 2) / std::pow(r(ii, j), 2);
  });
  const double bLbA1 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return au(ii) * duu(s, ii, j, k, 1, 1) / r(ii, j);
  });
  const double bA3 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return au(ii) * au(ii) * th(s, ii, j, k, 3) / std::pow(r(ii, j), 3);
  });
  const double bLbA2 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return au(ii) * au(ii) * duu(s, ii, j, k, 2, 1) / std::pow(r(ii, j), 2);
  });
  const double bLbLb = norm_Cbar(s, j, i, [&](int ii, int k) { return duu(s, ii, j, k, 0, 2); });
  const double bLbLbA1 = norm_Cbar(s, j, i, [&](int ii, int k) {
    return au(ii) * duu(s, ii, j, k, 1, 2) / r(ii, j);
  });

  const double su = std::sqrt(u);
  e.Ebar[0] = bA1 + dm * su * bLb;
  e.Ebar[1] = bA2 + dm * su * bLbA1;
  e.Ebar[2] = bA3 + dm * su * bLbA2;
  e.Fbar[0] = su * bLbLb;
  e.Fbar[1] = su * bLbLbA1;
  return e;
}

const char* multiplier_name(Multiplier m) {
  switch (m) {
    case Multiplier::L: return "L";
    case Multiplier::Lbar: return "Lbar";
    case Multiplier::Omega: return "Omega";
  }
  return "?";
}

IdentityResidual energy_identity_residual(const FieldState& s, const NullFormSpec& spec,
                                          Multiplier X, int i, int j, double floor) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  IdentityResidual out;
  out.multiplier = X;
  if (X == Multiplier::Omega) {
    // Azimuthal averages of every term vanish for axisymmetric fields.
    out.has_deformation_term = false;
    return out;
  }
  const bool is_l = X == Multiplier::L;
  auto ang2 = [&](int ii, int jj, int k) {
    const double a = s.dtheta_phi(ii, jj, k) / g.r(ii, jj);
    return a * a;
  };
  auto flux_cu = [&](int ii) {
    return flux_integral_C_u(
        g, ii,
        [&](int jj, int k) {
          if (is_l) return s.lphi(ii, jj, k) * s.lphi(ii, jj, k);
          return ang2(ii, jj, k);
        },
        j);
  };
  const double fbar = flux_integral_Cbar(
      g, j,
      [&](int ii, int k) {
        if (is_l) return ang2(ii, j, k);
        return s.lbarphi(ii, j, k) * s.lbarphi(ii, j, k);
      },
      i);

  const auto fc = frame_table(spec, g);
  double deform = 0.0, source = 0.0;
  {
    auto slice_def = [&](int ii) {
      return flux_integral_C_u(
          g, ii,
          [&](int jj, int k) {
            const double kl = s.lphi(ii, jj, k) * s.lbarphi(ii, jj, k) / g.r(ii, jj);
            return is_l ? kl : -kl;
          },
          j);
    };
    auto slice_src = [&](int ii) {
      return flux_integral_C_u(
          g, ii,
          [&](int jj, int k) {
            const FrameGradient gr = node_gradient(s, ii, jj, k);
            const double phi_q = evaluate_frame(fc[k], gr, gr);
            return phi_q * (is_l ? gr.l : gr.lbar);
          },
          j);
    };
    deform = trapezoid(slice_def, i + 1, g.du());
    source = trapezoid(slice_src, i + 1, g.du());
  }
  out.lhs = flux_cu(i) + fbar;
  out.rhs = flux_cu(0) - 2.0 * (deform + source);
  out.bulk_deformation = deform;
  out.bulk_source = source;
  out.residual = out.lhs - out.rhs;
  out.relative_residual = std::abs(out.residual) / std::max(std::abs(out.lhs), floor);
  return out;
}

LbarNorm lbar_L2_on_Cu(const FieldState& s, int i) {
  require_derived(s);
  LbarNorm out;
  out.value = norm_Cu(s, i, -1, [&](int j, int k) { return s.lbarphi(i, j, k); });
  out.weight = s.grid.delta() / std::abs(s.grid.u(i));
  return out;
}

std::vector<LinfRow> linf_table(const FieldState& s) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  const double d = g.delta();
  std::vector<LinfRow> rows;
  rows.reserve(g.nodes_u());
  for (int i = 0; i < g.nodes_u(); ++i) {
    LinfRow row;
    row.u = g.u(i);
    for (int j = 0; j < g.nodes_ubar(); ++j) {
      const double r = g.r(i, j);
      for (int k = 0; k < g.nodes_theta(); ++k) {
        const std::array<double, 6> v = {
            s.lphi(i, j, k),
            s.dtheta_phi(i, j, k) / r,
            s.lbarphi(i, j, k),
            dub(s, i, j, k, 1, 1) / r,
            th(s, i, j, k, 2) / (r * r),
            duu(s, i, j, k, 1, 1) / r};
        for (int q = 0; q < 6; ++q) row.sup[q] = std::max(row.sup[q], std::abs(v[q]));
      }
    }
    const double u = std::abs(row.u);
    const std::array<double, 6> w = {
        std::sqrt(d) * u,
        std::pow(d, -0.25) * std::pow(u, 1.75),
        std::pow(d, -0.25) * std::pow(u, 1.5),
        std::sqrt(d) * u * u,
        std::pow(d, -0.25) * std::pow(u, 2.75),
        std::pow(d, -0.25) * std::pow(u, 2.5)};
    for (int q = 0; q < 6; ++q) row.weighted[q] = w[q] * row.sup[q];
    rows.push_back(row);
  }
  return rows;
}

FocusingReport focusing_report(const FieldState& s, double tube_radius, double margin,
                               int row_count) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  if (g.mode() != AngularMode::Axisym)
    throw std::invalid_argument("focusing report needs axisym mode");
  if (!(tube_radius > 0.0) || !(margin >= 1.0) || row_count < 2)
    throw std::invalid_argument("invalid focusing report parameters");
  FocusingReport rep;
  rep.tube_radius = tube_radius;
  rep.split_angle = margin * tube_radius;

  auto energy = [&](int i, bool inside) {
    return flux_integral_C_u(g, i, [&](int j, int k) {
      if ((g.theta(k) <= rep.split_angle) != inside) return 0.0;
      const double l = s.lphi(i, j, k);
      const double a = s.dtheta_phi(i, j, k) / g.r(i, j);
      return l * l + a * a;
    });
  };
  const double in0 = energy(0, true);
  for (int m = 0; m < row_count; ++m) {
    const int i = static_cast<int>(std::lround(
        static_cast<double>(m) * g.n_u() / (row_count - 1)));
    FocusingRow row;
    row.u = g.u(i);
    row.in_tube = energy(i, true);
    row.out_tube = energy(i, false);
    row.in_tube_defect = std::abs(row.in_tube - in0);
    rep.out_tube_energy = std::max(rep.out_tube_energy, row.out_tube);
    rep.in_tube_defect = std::max(rep.in_tube_defect, row.in_tube_defect);
    rep.rows.push_back(row);
  }
  rep.in_tube_ratio = in0 > 0.0 ? rep.rows.back().in_tube / in0 : 0.0;

  const int jd = g.n_ubar();
  rep.cbar_delta_flux = flux_integral_Cbar(g, jd, [&](int i, int k) {
    const double l = s.lphi(i, jd, k);
    const double a = s.dtheta_phi(i, jd, k) / g.r(i, jd);
    return l * l + a * a;
  });
  rep.cbar_delta_flux_lbar = flux_integral_Cbar(g, jd, [&](int i, int k) {
    const double l = s.lbarphi(i, jd, k);
    const double a = s.dtheta_phi(i, jd, k) / g.r(i, jd);
    return l * l + a * a;
  });

  const int last = g.n_u();
  const double u0 = std::abs(g.u(0)), u1 = std::abs(g.u(last));
  for (int j = 0; j < g.nodes_ubar(); ++j)
    for (int k = 0; k < g.nodes_theta(); ++k) {
      const double a = s.lphi(last, j, k), b = s.lphi(0, j, k);
      rep.lphi_drift = std::max(rep.lphi_drift, std::abs(a - b));
      rep.lphi_drift_weighted = std::max(rep.lphi_drift_weighted, std::abs(u1 * a - u0 * b));
    }
  return rep;
}

CbarTrace trace_on_Cbar(const FieldState& s, int j) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  if (j < 0 || j > g.n_ubar()) throw std::out_of_range("ubar index");
  CbarTrace t;
  t.j = j;
  t.ubar = g.ubar(j);
  t.nodes_theta = g.nodes_theta();
  for (int i = 0; i < g.nodes_u(); ++i) {
    const double u = std::abs(g.u(i)), r = g.r(i, j);
    for (int k = 0; k < g.nodes_theta(); ++k) {
      const double l = s.lphi(i, j, k), lb = s.lbarphi(i, j, k);
      const double a = s.dtheta_phi(i, j, k) / r;
      t.phi.push_back(s.phi(i, j, k));
      t.lphi.push_back(l);
      t.lbarphi.push_back(lb);
      t.ang.push_back(a);
      t.sup_u_lphi = std::max(t.sup_u_lphi, u * std::abs(l));
      t.sup_u2_ang = std::max(t.sup_u2_ang, u * u * std::abs(a));
      t.sup_u2_lbarphi = std::max(t.sup_u2_lbarphi, u * u * std::abs(lb));
    }
  }
  return t;
}

CbarTrace trace_on_Cbar_delta(const FieldState& s) {
  return trace_on_Cbar(s, s.grid.n_ubar());
}

std::vector<double> radiation_field(const FieldState& s, int i) {
  const DoubleNullGrid& g = s.grid;
  if (i < 0 || i > g.n_u()) throw std::out_of_range("u index");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g.nodes_ubar()) * g.nodes_theta());
  const double u = std::abs(g.u(i));
  for (int j = 0; j < g.nodes_ubar(); ++j)
    for (int k = 0; k < g.nodes_theta(); ++k) out.push_back(u * s.psi(i, j, k) / g.r(i, j));
  return out;
}

double sobolev_ratio(const FieldState& s, int i, int j) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  const double u = std::abs(g.u(i));
  std::vector<double> p4(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k) p4[k] = std::pow(s.phi(i, j, k), 4);
  const double lhs = std::sqrt(u) * std::pow(sphere_integral(g, p4, g.r(i, j)), 0.25);
  const double nL = norm_Cu(s, i, j, [&](int jj, int k) { return s.lphi(i, jj, k); });
  const double nP = norm_Cu(s, i, j, [&](int jj, int k) { return s.phi(i, jj, k); });
  const double nA = norm_Cu(s, i, j, [&](int jj, int k) {
    return s.dtheta_phi(i, jj, k) / g.r(i, jj);
  });
  const double rhs = std::sqrt(nL) * (std::sqrt(nP) + std::sqrt(u) * std::sqrt(nA));
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

double pointwise_bound_excess(const FieldState& s, const NullFormSpec& spec) {
  require_derived(s);
  const DoubleNullGrid& g = s.grid;
  const auto fc = frame_table(spec, g);
  std::vector<double> c(g.nodes_theta());
  for (int k = 0; k < g.nodes_theta(); ++k)
    c[k] = pointwise_bound_constant(spec.q(), {1.0, g.theta(k), 0.0});
  double worst = -INFINITY;
  for (int i = 0; i < g.nodes_u(); ++i)
    for (int j = 0; j < g.nodes_ubar(); ++j)
      for (int k = 0; k < g.nodes_theta(); ++k) {
        const FrameGradient gr = node_gradient(s, i, j, k);
        const double q = std::abs(evaluate_frame(fc[k], gr, gr));
        worst = std::max(worst, q - c[k] * null_form_majorant(gr, gr));
      }
  return worst;
}

}  // namespace nullwave
