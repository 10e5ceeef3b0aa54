#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nullwave/nullform.hpp"

namespace nullwave {

/// Polynomial in (t, x, y, z) with exact monomial bookkeeping.
class Polynomial4 {
 public:
  using Exponents = std::array<int, 4>;

  Polynomial4() = default;
  static Polynomial4 constant(double c);
  static Polynomial4 coordinate(int a);
  static Polynomial4 monomial(const Exponents& e, double c);

  double operator()(const FourVector& x) const;
  Polynomial4 derivative(int a) const;
  FourVector gradient(const FourVector& x) const;

  Polynomial4& operator+=(const Polynomial4& o);
  friend Polynomial4 operator+(Polynomial4 a, const Polynomial4& b) { return a += b; }
  friend Polynomial4 operator-(Polynomial4 a, const Polynomial4& b) {
    return a += -1.0 * b;
  }
  friend Polynomial4 operator*(double s, Polynomial4 p);
  friend Polynomial4 operator*(const Polynomial4& a, const Polynomial4& b);

  int degree() const;
  const std::map<Exponents, double>& terms() const { return terms_; }

 private:
  std::map<Exponents, double> terms_;
};

/// Omega_ij P = x_i d_j P - x_j d_i P.
Polynomial4 apply_rotation(const Polynomial4& p, RotationPair ij);

/// Q(grad f, grad g) as a polynomial.
Polynomial4 null_form_polynomial(const NullFormCoeffs& q, const Polynomial4& f,
                                 const Polynomial4& g);

struct AlgebraSuiteOptions {
  int samples = 10000;           // null samples per basis form
  int frame_samples = 1000;
  int commutator_samples = 200;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  /// Test hook: replaces Q0 by Q0 + dt (x) dt in the null-cone check.
  bool corrupt_basis = false;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct AlgebraReport {
  std::vector<PropertyResult> properties;
  int dimension = 0;              // smallest certified value over seeds
  double runtime_s = 0.0;
  bool all_passed() const;
  const PropertyResult* find(const std::string& name) const;
};

AlgebraReport run_algebra_suite(const AlgebraSuiteOptions& opt = {});

/// Observed order of the finite-difference check of [X, Q] on smooth
/// fields, from steps h, h/2, h/4 (mean of the two ratios).
struct CommutatorOrder {
  std::array<double, 3> errors{};
  double order = 0.0;
};
CommutatorOrder null_direction_fd_order(const NullFormCoeffs& q, NullDirection dir,
                                        std::uint64_t seed, double h = 0.02);

}  // namespace nullwave
