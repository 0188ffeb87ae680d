#include "gsfluct/quadrature.hpp"

namespace gsfluct {

namespace {

// Roots and weights of the physicists' Hermite polynomial H_n via Newton
// iteration on the orthonormal recurrence, in extended precision. Standard
// initial guesses; roots found from the largest down on the positive half,
// mirrored onto the negative half.
void hermite_rule(int n, std::vector<long double>& x, std::vector<long double>& w) {
  constexpr long double eps = 1e-18L;
  constexpr int max_newton = 200;
  const long double pim4 = 0.7511255444649424828587030047762276930510L;  // pi^{-1/4}
  x.assign(n, 0.0L);
  w.assign(n, 0.0L);
  const int m = (n + 1) / 2;
  long double z = 0.0L;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(static_cast<long double>(2 * n + 1)) -
          1.85575L * std::pow(static_cast<long double>(2 * n + 1), -0.16667L);
    } else if (i == 1) {
      z -= 1.14L * std::pow(static_cast<long double>(n), 0.426L) / z;
    } else if (i == 2) {
      z = 1.86L * z - 0.86L * x[0];
    } else if (i == 3) {
      z = 1.91L * z - 0.91L * x[1];
    } else {
      z = 2.0L * z - x[i - 2];
    }
    long double pp = 0.0L;
    for (int it = 0; it < max_newton; ++it) {
      long double p1 = pim4;
      long double p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / j) * p2 - std::sqrt((j - 1.0L) / j) * p3;
      }
      pp = std::sqrt(2.0L * n) * p2;
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= eps) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0L / (pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

GaussHermite::GaussHermite(int node_count) {
  if (node_count < 2) throw std::invalid_argument("gsfluct: quadrature needs >= 2 nodes");
  std::vector<long double> x, w;
  hermite_rule(node_count, x, w);
  const long double sqrt_pi = 1.7724538509055160272981674833411451828L;
  const long double sqrt_two = 1.4142135623730950488016887242096980786L;
  const int n = node_count;
  nodes_.resize(x.size());
  weights_.resize(w.size());
  // Substitute eta = sqrt(2) x so the rule integrates against the standard
  // normal density; nodes stored ascending, weights normalized to sum ~ 1.
  for (int i = 0; i < n; ++i) {
    nodes_[i] = static_cast<double>(x[n - 1 - i] * sqrt_two);
    weights_[i] = static_cast<double>(w[n - 1 - i] / sqrt_pi);
  }
}

}  // namespace gsfluct
