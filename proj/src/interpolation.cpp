#include "gsfluct/interpolation.hpp"

#include <cmath>

#include "gsfluct/parallel.hpp"

namespace gsfluct {

PathGrid::PathGrid(int k) : steps(k) {
  if (k < 1 || k > (1 << 22)) throw std::invalid_argument("gsfluct: grid steps out of range");
  dt = 1.0 / static_cast<double>(k);
  times.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) times[i] = static_cast<double>(i) / static_cast<double>(k);
}

int PathGrid::index_of(double t) const {
  const double scaled = t * static_cast<double>(steps);
  const int k = static_cast<int>(std::llround(scaled));
  if (k < 0 || k > steps || std::abs(scaled - static_cast<double>(k)) > 1e-9) {
    throw std::invalid_argument("gsfluct: time is not a grid point");
  }
  return k;
}

double InterpolationPath::edge_value(std::size_t edge, int k) const {
  double sum = 0.0;
  const double* inc = edge_increments.data() + edge * static_cast<std::size_t>(steps);
  for (int l = 0; l < k; ++l) sum += inc[l];
  return sum;
}

InterpolationPath sample_path(const ModelParams& params, const PathGrid& grid,
                              std::uint64_t seed) {
  InterpolationPath path;
  path.n_sites = params.n_sites;
  path.steps = grid.steps;
  path.seed = seed;
  const std::size_t n_edges = params.n_edges();
  const std::size_t k = static_cast<std::size_t>(grid.steps);
  const double root_dt = std::sqrt(grid.dt);

  const std::uint64_t edge_key = rng::derive(seed, rng::kEdgeIncrements);
  path.edge_increments.resize(n_edges * k);
  for (std::size_t i = 0; i < n_edges * k; ++i) {
    path.edge_increments[i] = root_dt * rng::gaussian(edge_key, i);
  }

  const std::uint64_t site_key = rng::derive(seed, rng::kSiteIncrements);
  path.site_paths.assign(static_cast<std::size_t>(params.n_sites) * (k + 1), 0.0);
  path.eta.resize(static_cast<std::size_t>(params.n_sites));
  for (int i = 0; i < params.n_sites; ++i) {
    double* b = path.site_paths.data() + static_cast<std::size_t>(i) * (k + 1);
    b[0] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      b[l + 1] = b[l] + root_dt * rng::gaussian(site_key, static_cast<std::size_t>(i) * k + l);
    }
    path.eta[i] = b[k];
  }
  return path;
}

namespace {

struct PathObservables {
  std::vector<double> edge_products;  // sigma_i sigma_j per edge, i<j order
  std::vector<double> spins;          // sigma_i as doubles
  double sum_spin = 0.0;
  double sum_sq = 0.0;
};

PathObservables config_products(const SpinConfiguration& config, const ModelParams& params) {
  check_configuration(config, params);
  PathObservables out;
  const int n = params.n_sites;
  out.edge_products.reserve(params.n_edges());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.edge_products.push_back(static_cast<double>(config[i]) * config[j]);
    }
  }
  out.spins.reserve(static_cast<std::size_t>(n));
  for (int s : config) {
    out.spins.push_back(static_cast<double>(s));
    out.sum_spin += s;
    out.sum_sq += static_cast<double>(s) * s;
  }
  return out;
}

}  // namespace

HamiltonianPath hamiltonian_path(const SpinConfiguration& config, const InterpolationPath& path,
                                 const FixedPoint& fp, const ModelParams& params) {
  if (!fp.converged) throw std::invalid_argument("gsfluct: hamiltonian_path needs a converged fixed point");
  if (path.n_sites != params.n_sites) throw std::invalid_argument("gsfluct: path size mismatch");
  const PathObservables obs = config_products(config, params);
  const int n = params.n_sites;
  const int k_steps = path.steps;
  const double beta_root_q = params.beta * std::sqrt(fp.q);
  const double edge_scale = params.beta / std::sqrt(static_cast<double>(n));
  const double drift_rate =
      -0.5 * params.beta * params.beta * (fp.p - fp.q) * obs.sum_sq;
  const double dt = 1.0 / static_cast<double>(k_steps);

  HamiltonianPath hp;
  double h0 = 0.0;
  for (int i = 0; i < n; ++i) h0 += obs.spins[i] * path.eta[i];
  h0 *= beta_root_q;
  h0 += (0.5 * params.beta * params.beta * (fp.p - fp.q) + params.D) * obs.sum_sq +
        params.h * obs.sum_spin;
  hp.initial = h0;
  hp.values.resize(static_cast<std::size_t>(k_steps) + 1);
  hp.martingale_part.assign(static_cast<std::size_t>(k_steps) + 1, 0.0);
  hp.drift_part.assign(static_cast<std::size_t>(k_steps) + 1, 0.0);
  hp.values[0] = h0;

  const std::size_t n_edges = params.n_edges();
  double martingale = 0.0;
  double drift = 0.0;
  for (int k = 0; k < k_steps; ++k) {
    double increment = 0.0;
    for (std::size_t e = 0; e < n_edges; ++e) {
      increment += obs.edge_products[e] * path.edge_increment(e, k);
    }
    increment *= edge_scale;
    // dW over [t_k, t_{k+1}] by index reversal of the site path
    double site_part = 0.0;
    for (int i = 0; i < n; ++i) {
      site_part += obs.spins[i] * (path.reversed_site(i, k + 1) - path.reversed_site(i, k));
    }
    increment += beta_root_q * site_part;
    martingale += increment;
    drift += drift_rate * dt;
    hp.martingale_part[k + 1] = martingale;
    hp.drift_part[k + 1] = drift;
    hp.values[k + 1] = h0 + martingale + drift;
  }
  return hp;
}

EndpointCheck endpoint_identity_check(const SpinConfiguration& config,
                                      const InterpolationPath& path, const FixedPoint& fp,
                                      const ModelParams& params) {
  const HamiltonianPath hp = hamiltonian_path(config, path, fp, params);
  DisorderSample endpoint_disorder;
  endpoint_disorder.seed = path.seed;
  const std::size_t n_edges = params.n_edges();
  endpoint_disorder.couplings.resize(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    endpoint_disorder.couplings[e] = path.edge_value(e, path.steps);
  }
  const double h_n = hamiltonian(config, endpoint_disorder, params);
  return EndpointCheck{std::abs(hp.values.back() - h_n), h_n};
}

QvEstimate quadratic_variation_estimate(const SpinConfiguration& config1,
                                        const SpinConfiguration& config2,
                                        const InterpolationPath& path, const FixedPoint& fp,
                                        const ModelParams& params) {
  const HamiltonianPath hp1 = hamiltonian_path(config1, path, fp, params);
  const HamiltonianPath hp2 = hamiltonian_path(config2, path, fp, params);
  double cross = 0.0;
  for (int k = 0; k < path.steps; ++k) {
    cross += (hp1.values[k + 1] - hp1.values[k]) * (hp2.values[k + 1] - hp2.values[k]);
  }
  const OverlapStats o = overlaps(config1, config2);
  const double beta_sq = params.beta * params.beta;
  const double n = static_cast<double>(params.n_sites);
  QvEstimate out;
  out.empirical = cross;
  out.analytic = beta_sq * n / 2.0 * (o.r * o.r - o.u) + beta_sq * fp.q * n * o.r;
  return out;
}

DriftCheck drift_rearrangement_check(double r11, double r12, double u11, double u12, double p,
                                     double q, double beta, double n) {
  const double b2n = beta * beta * n;
  DriftCheck out;
  out.lhs = -b2n / 2.0 * (p - q) * r11 + b2n / 4.0 * (r11 * r11 - u11) + b2n / 2.0 * q * r11 -
            b2n / 4.0 * (r12 * r12 - u12) - b2n / 2.0 * q * r12;
  out.rhs = b2n / 4.0 *
                ((r11 - p) * (r11 - p) - (r12 - q) * (r12 - q) + q * q - p * p + u12 - u11) +
            b2n * q * (r11 - r12);
  return out;
}

EnumHamiltonian interpolated_hamiltonian(const InterpolationPath& path, int k,
                                         const FixedPoint& fp, const ModelParams& params) {
  const int n = params.n_sites;
  const double t = static_cast<double>(k) / static_cast<double>(path.steps);
  EnumHamiltonian ham;
  ham.n = n;
  ham.spin_cap = params.spin_cap;
  ham.n_states = params.state_count();
  ham.quad = 0.5 * params.beta * params.beta * (fp.p - fp.q) * (1.0 - t) + params.D;
  const double beta_root_q = params.beta * std::sqrt(fp.q);
  ham.linear.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ham.linear[i] = beta_root_q * path.reversed_site(i, k) + params.h;
  }
  ham.coupling.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double scale = params.beta / std::sqrt(static_cast<double>(n));
  std::size_t e = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++e) {
      ham.set_coupling(i, j, scale * path.edge_value(e, k));
    }
  }
  return ham;
}

IbpEstimate ibp_identity_estimate(const ModelParams& params, const FixedPoint& fp, double t,
                                  int sample_count, const PathGrid& grid, std::uint64_t seed,
                                  int workers) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("gsfluct: t must lie inside (0, 1)");
  if (sample_count < 2) throw std::invalid_argument("gsfluct: need >= 2 samples");
  const int k = grid.index_of(t);
  if (k == 0 || k == grid.steps) throw std::invalid_argument("gsfluct: t must be interior");

  std::vector<double> lhs(static_cast<std::size_t>(sample_count));
  std::vector<double> rhs(static_cast<std::size_t>(sample_count));
  const double beta_root_q = params.beta * std::sqrt(fp.q);
  const double beta_sq_q_n = params.beta * params.beta * fp.q * params.n_sites;

  parallel_for(static_cast<std::size_t>(sample_count), workers, [&](std::size_t j) {
    const InterpolationPath path = sample_path(params, grid, rng::sample_seed(seed, j));
    const EnumHamiltonian ham = interpolated_hamiltonian(path, k, fp, params);
    const GibbsSiteStats stats = gibbs_site_stats(ham, /*with_pairs=*/false);
    double dot = 0.0;
    for (int i = 0; i < params.n_sites; ++i) {
      dot += stats.site_mean[i] * path.reversed_site(i, k);
    }
    lhs[j] = beta_root_q * dot / (1.0 - t);
    rhs[j] = beta_sq_q_n * (stats.r11_mean - stats.r12_mean());
  });

  return IbpEstimate{mean_se(lhs), mean_se(rhs)};
}

}  // namespace gsfluct
