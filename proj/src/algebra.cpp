#include "nullwave/algebra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nullwave {

Polynomial4 Polynomial4::constant(double c) { return monomial({0, 0, 0, 0}, c); }

Polynomial4 Polynomial4::coordinate(int a) {
  Exponents e{0, 0, 0, 0};
  e.at(a) = 1;
  return monomial(e, 1.0);
}

Polynomial4 Polynomial4::monomial(const Exponents& e, double c) {
  Polynomial4 p;
  if (c != 0.0) p.terms_[e] = c;
  return p;
}

double Polynomial4::operator()(const FourVector& x) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int a = 0; a < 4; ++a)
      for (int n = 0; n < e[a]; ++n) m *= x[a];
    s += m;
  }
  return s;
}

Polynomial4 Polynomial4::derivative(int a) const {
  Polynomial4 out;
  for (const auto& [e, c] : terms_) {
    if (e[a] == 0) continue;
    Exponents d = e;
    --d[a];
    out += monomial(d, c * e[a]);
  }
  return out;
}

FourVector Polynomial4::gradient(const FourVector& x) const {
  FourVector g{};
  for (int a = 0; a < 4; ++a) g[a] = derivative(a)(x);
  return g;
}

Polynomial4& Polynomial4::operator+=(const Polynomial4& o) {
  for (const auto& [e, c] : o.terms_) {
    const double v = (terms_[e] += c);
    if (v == 0.0) terms_.erase(e);
  }
  return *this;
}

Polynomial4 operator*(double s, Polynomial4 p) {
  if (s == 0.0) return {};
  for (auto& [e, c] : p.terms_) c *= s;
  return p;
}

Polynomial4 operator*(const Polynomial4& a, const Polynomial4& b) {
  Polynomial4 out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial4::Exponents e;
      for (int k = 0; k < 4; ++k) e[k] = ea[k] + eb[k];
      out += Polynomial4::monomial(e, ca * cb);
    }
  return out;
}

int Polynomial4::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

Polynomial4 apply_rotation(const Polynomial4& p, RotationPair ij) {
  if (ij.i < 1 || ij.j > 3 || ij.i >= ij.j)
    throw std::invalid_argument("rotation pair must satisfy 1 <= i < j <= 3");
  return Polynomial4::coordinate(ij.i) * p.derivative(ij.j) -
         Polynomial4::coordinate(ij.j) * p.derivative(ij.i);
}

Polynomial4 null_form_polynomial(const NullFormCoeffs& q, const Polynomial4& f,
                                 const Polynomial4& g) {
  Polynomial4 out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      FourVector ea{}, eb{};
      ea[a] = 1.0;
      eb[b] = 1.0;
      const double c = evaluate_cartesian(q, ea, eb);
      if (c != 0.0) out += c * (f.derivative(a) * g.derivative(b));
    }
  return out;
}

bool AlgebraReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

const PropertyResult* AlgebraReport::find(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

using Rng = std::mt19937_64;
using Bilinear = std::function<double(const FourVector&, const FourVector&)>;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

NullFormCoeffs random_form(Rng& rng) {
  NullFormCoeffs q;
  q.c0 = uniform(rng, -1.0, 1.0);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) q.set_c(a, b, uniform(rng, -1.0, 1.0));
  return q;
}

FourVector random_vector(Rng& rng) {
  return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
          uniform(rng, -1.0, 1.0)};
}

Polynomial4 random_cubic(Rng& rng) {
  Polynomial4 p;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3 - a; ++b)
      for (int c = 0; c <= 3 - a - b; ++c)
        for (int d = 0; d <= 3 - a - b - c; ++d)
          p += Polynomial4::monomial({a, b, c, d}, uniform(rng, -1.0, 1.0));
  return p;
}

double norm4(const FourVector& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

SpherePoint to_sphere(const FourVector& x) {
  const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  return {r, std::acos(x[3] / r), std::atan2(x[2], x[1])};
}

FourVector random_point(Rng& rng) {
  FourVector x;
  do {
    x = {uniform(rng, -2.0, 2.0), uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0),
         uniform(rng, -3.0, 3.0)};
  } while (std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) < 0.5);
  return x;
}

PropertyResult dimension_property(const AlgebraSuiteOptions& opt, int& dim_out) {
  PropertyResult p{"dimension", true, 0.0, 0.0, ""};
  dim_out = 16;
  const int samples = std::max(64, std::min(opt.samples, 400));
  for (std::uint64_t seed : opt.seeds) {
    const int d = certify_null_dimension(samples, seed);
    dim_out = std::min(dim_out, d);
    p.detail += (p.detail.empty() ? "" : " ") + std::to_string(d);
    if (d != 7) p.passed = false;
  }
  p.metric = dim_out;
  p.tolerance = 7;
  return p;
}

PropertyResult symmetric_property(const AlgebraSuiteOptions& opt) {
  const int d = certify_null_dimension(std::max(64, std::min(opt.samples, 400)),
                                       opt.seeds.empty() ? 1 : opt.seeds.front(), true);
  return {"symmetric_dimension", d == 1, static_cast<double>(d), 1.0,
          "symmetric null forms are multiples of the metric"};
}

PropertyResult null_cone_property(const AlgebraSuiteOptions& opt) {
  std::vector<std::pair<std::string, Bilinear>> forms;
  for (BasisKind k : kAllBasisKinds) {
    const NullFormCoeffs q = basis_form(k);
    Bilinear b = [q](const FourVector& x, const FourVector& y) {
      return evaluate_cartesian(q, x, y);
    };
    if (opt.corrupt_basis && k == BasisKind::Q0)
      b = [q](const FourVector& x, const FourVector& y) {
        return evaluate_cartesian(q, x, y) + x[0] * y[0];
      };
    forms.emplace_back(std::string(basis_name(k)), b);
  }
  PropertyResult p{"null_cone_vanishing", true, 0.0, 1e-12, ""};
  Rng rng(opt.seeds.empty() ? 1 : opt.seeds.front());
  std::normal_distribution<double> gauss;
  for (const auto& [name, b] : forms) {
    double worst = 0.0;
    for (int s = 0; s < opt.samples; ++s) {
      std::array<double, 3> w{gauss(rng), gauss(rng), gauss(rng)};
      const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
      const double lam = uniform(rng, 0.1, 10.0) * (s % 2 ? 1.0 : -1.0);
      const FourVector xi{lam, lam * w[0] / n, lam * w[1] / n, lam * w[2] / n};
      worst = std::max(worst, std::abs(b(xi, xi)));
    }
    p.metric = std::max(p.metric, worst);
    if (worst > p.tolerance) {
      p.passed = false;
      p.detail += (p.detail.empty() ? "" : ", ") + name + " does not vanish on null vectors";
    }
  }
  return p;
}

PropertyResult frame_property(const AlgebraSuiteOptions& opt) {
  PropertyResult p{"frame_equivalence", true, 0.0, 1e-12, "relative to |q||f||g|"};
  Rng rng(opt.seeds.empty() ? 1 : opt.seeds.front() + 101);
  for (int s = 0; s < opt.frame_samples; ++s) {
    const NullFormCoeffs q = random_form(rng);
    const SpherePoint pt{uniform(rng, 0.5, 10.0), uniform(rng, 0.01, std::numbers::pi - 0.01),
                         uniform(rng, 0.0, 2.0 * std::numbers::pi)};
    const FourVector f = random_vector(rng), g = random_vector(rng);
    const double cart = evaluate_cartesian(q, f, g);
    const double frame =
        evaluate_frame(frame_components(q, pt), to_frame(f, pt), to_frame(g, pt));
    const double scale = q.norm() * norm4(f) * norm4(g);
    const double diag = std::max(std::abs(frame_diagonal_null_terms(q, pt)[0]),
                                 std::abs(frame_diagonal_null_terms(q, pt)[1]));
    p.metric = std::max({p.metric, std::abs(cart - frame) / scale, diag / q.norm()});
  }
  p.passed = p.metric <= p.tolerance;
  return p;
}

PropertyResult rotation_property(const AlgebraSuiteOptions& opt) {
  PropertyResult p{"rotation_commutator", true, 0.0, 1e-12, "cubic polynomial fields"};
  Rng rng(opt.seeds.empty() ? 1 : opt.seeds.front() + 202);
  std::vector<NullFormCoeffs> forms;
  for (BasisKind k : kAllBasisKinds) forms.push_back(basis_form(k));
  forms.push_back(random_form(rng));
  const int pairs = std::max(2, opt.commutator_samples / 20);
  for (int s = 0; s < pairs; ++s) {
    const Polynomial4 f = random_cubic(rng), g = random_cubic(rng);
    for (const auto& q : forms)
      for (RotationPair ij : {RotationPair{1, 2}, RotationPair{1, 3}, RotationPair{2, 3}}) {
        const NullFormCoeffs qt = rotation_commutator(q, ij);
        const Polynomial4 lhs = apply_rotation(null_form_polynomial(q, f, g), ij);
        const Polynomial4 rhs = null_form_polynomial(q, apply_rotation(f, ij), g) +
                                null_form_polynomial(q, f, apply_rotation(g, ij)) +
                                null_form_polynomial(qt, f, g);
        for (int m = 0; m < 4; ++m) {
          const FourVector x = random_point(rng);
          const double a = lhs(x), b = rhs(x);
          p.metric = std::max(p.metric, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
      }
  }
  p.passed = p.metric <= p.tolerance;
  return p;
}

PropertyResult projector_property(const AlgebraSuiteOptions& opt) {
  PropertyResult p{"commutator_projector_agreement", true, 0.0, 1e-12, ""};
  Rng rng(opt.seeds.empty() ? 1 : opt.seeds.front() + 303);
  for (int s = 0; s < opt.commutator_samples; ++s) {
    const NullFormCoeffs q = random_form(rng);
    const SpherePoint pt{uniform(rng, 0.5, 10.0), uniform(rng, 0.01, std::numbers::pi - 0.01),
                         uniform(rng, 0.0, 2.0 * std::numbers::pi)};
    const FrameGradient f = to_frame(random_vector(rng), pt);
    const FrameGradient g = to_frame(random_vector(rng), pt);
    for (NullDirection d : {NullDirection::L, NullDirection::Lbar}) {
      const double a = null_direction_commutator(q, d, pt, f, g, rotation_values(pt, f),
                                                 rotation_values(pt, g));
      const double b = null_direction_commutator_projector(q, d, pt, f, g);
      p.metric = std::max(p.metric, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
  }
  p.passed = p.metric <= p.tolerance;
  return p;
}

PropertyResult fd_order_property(const AlgebraSuiteOptions& opt) {
  PropertyResult p{"null_direction_fd_order", true, 2.0, 0.3, ""};
  Rng rng(opt.seeds.empty() ? 1 : opt.seeds.front() + 404);
  double worst = 2.0;
  for (NullDirection d : {NullDirection::L, NullDirection::Lbar}) {
    const CommutatorOrder o = null_direction_fd_order(random_form(rng), d, rng());
    p.detail += std::string(d == NullDirection::L ? "L " : " Lbar ") + std::to_string(o.order);
    if (std::abs(o.order - 2.0) > std::abs(worst - 2.0)) worst = o.order;
    if (!(std::abs(o.order - 2.0) <= p.tolerance)) p.passed = false;
  }
  p.metric = worst;
  return p;
}

}  // namespace

CommutatorOrder null_direction_fd_order(const NullFormCoeffs& q, NullDirection dir,
                                        std::uint64_t seed, double h) {
  Rng rng(seed);
  const double sgn = dir == NullDirection::L ? 1.0 : -1.0;
  std::vector<std::pair<Polynomial4, Polynomial4>> fields;
  std::vector<FourVector> points;
  for (int m = 0; m < 8; ++m) {
    fields.emplace_back(random_cubic(rng), random_cubic(rng));
    points.push_back(random_point(rng));
  }
  auto X = [sgn](const FourVector& x) {
    const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    return FourVector{1.0, sgn * x[1] / r, sgn * x[2] / r, sgn * x[3] / r};
  };
  auto Xof = [&](const Polynomial4& f, const FourVector& x) {
    const FourVector v = X(x), g = f.gradient(x);
    return v[0] * g[0] + v[1] * g[1] + v[2] * g[2] + v[3] * g[3];
  };
  CommutatorOrder out;
  for (int level = 0; level < 3; ++level) {
    const double step = h / (1 << level);
    double err = 0.0;
    for (std::size_t m = 0; m < points.size(); ++m) {
      const auto& [f, g] = fields[m];
      const FourVector x0 = points[m];
      auto grad_fd = [&](const Polynomial4& p) {
        FourVector d{};
        for (int a = 0; a < 4; ++a) {
          FourVector xp = x0, xm = x0;
          xp[a] += step;
          xm[a] -= step;
          d[a] = (Xof(p, xp) - Xof(p, xm)) / (2.0 * step);
        }
        return d;
      };
      const FourVector v = X(x0);
      auto Qat = [&](double s) {
        FourVector x = x0;
        for (int a = 0; a < 4; ++a) x[a] += s * v[a];
        return evaluate_cartesian(q, f.gradient(x), g.gradient(x));
      };
      const double xq = (Qat(step) - Qat(-step)) / (2.0 * step);
      const FourVector gf = f.gradient(x0), gg = g.gradient(x0);
      const double fd = evaluate_cartesian(q, grad_fd(f), gg) +
                        evaluate_cartesian(q, gf, grad_fd(g)) - xq;
      const SpherePoint pt = to_sphere(x0);
      const FrameGradient ff = to_frame(gf, pt), fg = to_frame(gg, pt);
      const double exact = null_direction_commutator(q, dir, pt, ff, fg,
                                                     rotation_values(pt, ff),
                                                     rotation_values(pt, fg));
      err = std::max(err, std::abs(fd - exact));
    }
    out.errors[level] = err;
  }
  out.order = 0.5 * (std::log2(out.errors[0] / out.errors[1]) +
                     std::log2(out.errors[1] / out.errors[2]));
  return out;
}

AlgebraReport run_algebra_suite(const AlgebraSuiteOptions& opt) {
  if (opt.samples < 1 || opt.frame_samples < 1 || opt.commutator_samples < 1)
    throw std::invalid_argument("sample counts must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  AlgebraReport rep;
  rep.properties.push_back(dimension_property(opt, rep.dimension));
  rep.properties.push_back(symmetric_property(opt));
  rep.properties.push_back(null_cone_property(opt));
  rep.properties.push_back(frame_property(opt));
  rep.properties.push_back(rotation_property(opt));
  rep.properties.push_back(projector_property(opt));
  rep.properties.push_back(fd_order_property(opt));
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace nullwave
