#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace gsfluct {

/// Gauss-Hermite quadrature standardized for expectations against the
/// standard normal density: E[f(eta)] ~= sum_i v_i f(z_i).
class GaussHermite {
 public:
  explicit GaussHermite(int node_count);

  int size() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double expect(F&& f) const {
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double fx = f(nodes_[i]);
      if (!std::isfinite(fx)) {
        throw std::domain_error("gsfluct: integrand non-finite at quadrature node");
      }
      const double y = weights_[i] * fx - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace gsfluct
