#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nullwave {

// Node values over (u, ubar, theta), stored u-major then ubar then theta.
class Field3 {
 public:
  Field3() = default;
  Field3(int nu, int nub, int nth, double fill = 0.0)
      : nu_(nu), nub_(nub), nth_(nth),
        v_(static_cast<std::size_t>(nu) * nub * nth, fill) {}

  int nu() const { return nu_; }
  int nub() const { return nub_; }
  int nth() const { return nth_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& operator()(int i, int j, int k) { return v_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }

  std::span<double> row(int i, int j) {
    return {v_.data() + index(i, j, 0), static_cast<std::size_t>(nth_)};
  }
  std::span<const double> row(int i, int j) const {
    return {v_.data() + index(i, j, 0), static_cast<std::size_t>(nth_)};
  }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  friend bool operator==(const Field3&, const Field3&) = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * nub_ + j) * nth_ + k;
  }

  int nu_ = 0, nub_ = 0, nth_ = 0;
  std::vector<double> v_;
};

}  // namespace nullwave
