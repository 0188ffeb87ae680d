#pragma once

#include "gsfluct/model.hpp"
#include "gsfluct/quadrature.hpp"

namespace gsfluct {

/// Self-consistent pair (p, q) of the effective single-site measure:
/// p = E[s(eta)] (mean squared spin), q = E[m(eta)^2] (squared magnetization).
struct FixedPoint {
  double p = 0.0;
  double q = 0.0;
  double residual = 0.0;  // sup-norm of the undamped update at the returned point
  int iterations = 0;
  bool converged = false;
  bool oscillating = false;
};

struct SiteMoments {
  double m = 0.0;  // first moment of the single-site measure
  double s = 0.0;  // second moment
};

struct EffectiveSite {
  double eta = 0.0;
  double w = 0.0;
  double m = 0.0;
  double s = 0.0;
};

/// Asymptotic law of the centered free energy: variance nu^2 together with
/// the pieces it is built from.
struct LimitLaw {
  double nu_squared = 0.0;      // after the small-negative clamp policy
  double var_log_w = 0.0;
  double mean_log_w = 0.0;      // = (1/N) E[log Z_0]
  double centering_rate = 0.0;  // beta^2 (q^2 - p^2) / 4
  double nu_squared_raw = 0.0;  // var_log_w - beta^2 q^2 / 2, unclamped
  bool clamped = false;         // raw value in [-1e-10, 0) was clamped to 0
  bool negative = false;        // raw value < -1e-10; reported, never hidden
};

inline constexpr double kNuSquaredClampFloor = -1e-10;

/// W(eta) = sum_{g=-S..S} exp((beta sqrt(q) eta + h) g + g^2 (beta^2/2 (p-q) + D)).
double w_value(double eta, double p, double q, const ModelParams& params);
double log_w_value(double eta, double p, double q, const ModelParams& params);

/// log W regrouped as log(1 + sum_{g=1..S} 2 cosh((beta sqrt(q) eta + h) g)
/// exp(g^2 (beta^2/2 (p-q) + D))); algebraically identical to log_w_value.
double log_w_cosh_form(double eta, double p, double q, const ModelParams& params);

/// First and second moments of the single-site measure with weights
/// proportional to the summands of W. Odd terms are paired so that m is
/// exactly zero when the effective field beta sqrt(q) eta + h vanishes.
SiteMoments site_moments(double eta, double p, double q, const ModelParams& params);

EffectiveSite effective_site(double eta, double p, double q, const ModelParams& params);

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  int node_count = 64;
  double damping = 0.5;
};

/// Damped iteration of (p, q) <- (E[s], E[m^2]) from the beta = 0 closed-form
/// start. Returns the first iterate whose undamped update is within tol, so
/// exact fixed points (beta = 0, or q = 0 at h = 0) are returned bit-exactly.
FixedPoint fixed_point_solve(const ModelParams& params, const FixedPointOptions& options);
FixedPoint fixed_point_solve(const ModelParams& params, double tol, int max_iter);

/// E[log W] by Gauss-Hermite quadrature of the cosh regrouping.
double expected_log_w(const FixedPoint& fp, const ModelParams& params, int node_count);

/// Var(log W) (central two-pass quadrature) and nu^2 = Var(log W) - beta^2 q^2 / 2.
LimitLaw limit_variance(const FixedPoint& fp, const ModelParams& params, int node_count);

}  // namespace gsfluct
