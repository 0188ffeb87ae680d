#include "gsfluct/effective.hpp"

#include <algorithm>
#include <cmath>

namespace gsfluct {

namespace {

struct SiteWeights {
  double a = 0.0;      // beta sqrt(q) eta + h
  double b = 0.0;      // beta^2/2 (p - q) + D
  double shift = 0.0;  // max exponent over g
};

SiteWeights site_weights(double eta, double p, double q, const ModelParams& params) {
  if (!(q >= 0.0)) throw std::domain_error("gsfluct: q must be nonnegative");
  SiteWeights sw;
  sw.a = params.beta * std::sqrt(q) * eta + params.h;
  sw.b = 0.5 * params.beta * params.beta * (p - q) + params.D;
  sw.shift = 0.0;  // g = 0 exponent
  for (int g = 1; g <= params.spin_cap; ++g) {
    const double bg = sw.b * g * g;
    sw.shift = std::max(sw.shift, std::max(sw.a * g + bg, -sw.a * g + bg));
  }
  return sw;
}

}  // namespace

double w_value(double eta, double p, double q, const ModelParams& params) {
  const SiteWeights sw = site_weights(eta, p, q, params);
  double sum = std::exp(0.0 - sw.shift);
  for (int g = 1; g <= params.spin_cap; ++g) {
    const double bg = sw.b * g * g;
    sum += std::exp(sw.a * g + bg - sw.shift) + std::exp(-sw.a * g + bg - sw.shift);
  }
  return std::exp(sw.shift) * sum;
}

double log_w_value(double eta, double p, double q, const ModelParams& params) {
  const SiteWeights sw = site_weights(eta, p, q, params);
  double sum = std::exp(0.0 - sw.shift);
  for (int g = 1; g <= params.spin_cap; ++g) {
    const double bg = sw.b * g * g;
    sum += std::exp(sw.a * g + bg - sw.shift) + std::exp(-sw.a * g + bg - sw.shift);
  }
  return sw.shift + std::log(sum);
}

double log_w_cosh_form(double eta, double p, double q, const ModelParams& params) {
  if (!(q >= 0.0)) throw std::domain_error("gsfluct: q must be nonnegative");
  const double a = params.beta * std::sqrt(q) * eta + params.h;
  const double b = 0.5 * params.beta * params.beta * (p - q) + params.D;
  const double abs_a = std::abs(a);
  // terms: exponent 0 for g=0, and |a|g + b g^2 + log(1 + e^{-2|a|g}) for g>=1
  double shift = 0.0;
  std::vector<double> exponents(static_cast<std::size_t>(params.spin_cap));
  for (int g = 1; g <= params.spin_cap; ++g) {
    const double e = abs_a * g + b * g * g + std::log1p(std::exp(-2.0 * abs_a * g));
    exponents[g - 1] = e;
    shift = std::max(shift, e);
  }
  double sum = std::exp(0.0 - shift);
  for (double e : exponents) sum += std::exp(e - shift);
  return shift + std::log(sum);
}

SiteMoments site_moments(double eta, double p, double q, const ModelParams& params) {
  const SiteWeights sw = site_weights(eta, p, q, params);
  double den = std::exp(0.0 - sw.shift);
  double num_m = 0.0;
  double num_s = 0.0;
  for (int g = 1; g <= params.spin_cap; ++g) {
    const double bg = sw.b * g * g;
    const double w_plus = std::exp(sw.a * g + bg - sw.shift);
    const double w_minus = std::exp(-sw.a * g + bg - sw.shift);
    den += w_plus + w_minus;
    num_m += g * (w_plus - w_minus);
    num_s += static_cast<double>(g) * g * (w_plus + w_minus);
  }
  SiteMoments out;
  out.m = num_m / den;
  out.s = num_s / den;
  return out;
}

EffectiveSite effective_site(double eta, double p, double q, const ModelParams& params) {
  const SiteMoments mo = site_moments(eta, p, q, params);
  return EffectiveSite{eta, w_value(eta, p, q, params), mo.m, mo.s};
}

FixedPoint fixed_point_solve(const ModelParams& params, const FixedPointOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("gsfluct: tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("gsfluct: max_iter must be positive");
  const GaussHermite gh(options.node_count);

  // beta = 0 closed form: the single-site measure decouples from (eta, p, q).
  ModelParams free_site = params;
  free_site.beta = 0.0;
  const SiteMoments m0 = site_moments(0.0, 0.0, 0.0, free_site);
  double p_cur = m0.s;
  double q_cur = m0.m * m0.m;

  const auto nodes = gh.nodes();
  const auto weights = gh.weights();
  double residual = std::numeric_limits<double>::infinity();
  double prev_residual = std::numeric_limits<double>::infinity();
  int increases = 0;

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    double phi_p = 0.0, phi_q = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const SiteMoments mo = site_moments(nodes[i], p_cur, q_cur, params);
      phi_p += weights[i] * mo.s;
      phi_q += weights[i] * (mo.m * mo.m);
    }
    residual = std::max(std::abs(phi_p - p_cur), std::abs(phi_q - q_cur));
    if (residual <= options.tol) {
      return FixedPoint{p_cur, q_cur, residual, iter, true, false};
    }
    if (residual > prev_residual) ++increases;
    prev_residual = residual;
    p_cur = (1.0 - options.damping) * p_cur + options.damping * phi_p;
    q_cur = (1.0 - options.damping) * q_cur + options.damping * phi_q;
  }
  const bool oscillating = increases > options.max_iter / 4;
  return FixedPoint{p_cur, q_cur, residual, options.max_iter, false, oscillating};
}

FixedPoint fixed_point_solve(const ModelParams& params, double tol, int max_iter) {
  FixedPointOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return fixed_point_solve(params, options);
}

double expected_log_w(const FixedPoint& fp, const ModelParams& params, int node_count) {
  const GaussHermite gh(node_count);
  return gh.expect([&](double eta) { return log_w_cosh_form(eta, fp.p, fp.q, params); });
}

LimitLaw limit_variance(const FixedPoint& fp, const ModelParams& params, int node_count) {
  if (!fp.converged) throw std::invalid_argument("gsfluct: limit_variance needs a converged fixed point");
  const GaussHermite gh(node_count);
  const double mean = gh.expect([&](double eta) { return log_w_cosh_form(eta, fp.p, fp.q, params); });
  const double var = gh.expect([&](double eta) {
    const double d = log_w_cosh_form(eta, fp.p, fp.q, params) - mean;
    return d * d;
  });
  LimitLaw law;
  law.mean_log_w = mean;
  law.var_log_w = var;
  law.centering_rate = params.beta * params.beta * (fp.q * fp.q - fp.p * fp.p) / 4.0;
  law.nu_squared_raw = var - 0.5 * params.beta * params.beta * fp.q * fp.q;
  law.nu_squared = law.nu_squared_raw;
  if (law.nu_squared_raw < 0.0) {
    if (law.nu_squared_raw >= kNuSquaredClampFloor) {
      law.nu_squared = 0.0;
      law.clamped = true;
    } else {
      law.negative = true;  // surfaced to callers; the limit law is suspect here
    }
  }
  return law;
}

}  // namespace gsfluct
