#include "gsfluct/model.hpp"

#include <algorithm>
#include <string>

namespace gsfluct {

namespace {

std::uint64_t checked_state_count(int S, int N, std::uint64_t cap) {
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(S) + 1;
  std::uint64_t count = 1;
  for (int i = 0; i < N; ++i) {
    if (count > cap / base) {
      throw std::invalid_argument("gsfluct: (2S+1)^N exceeds the enumeration cap");
    }
    count *= base;
  }
  return count;
}

}  // namespace

ModelParams::ModelParams(int S, int N, double beta_, double h_, double D_, std::uint64_t cap)
    : spin_cap(S), n_sites(N), beta(beta_), h(h_), D(D_), enumeration_cap(cap) {
  if (S < 1) throw std::invalid_argument("gsfluct: spin cap S must be >= 1");
  if (N < 1) throw std::invalid_argument("gsfluct: system size N must be >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("gsfluct: beta must be >= 0");
  if (!(h >= 0.0)) throw std::invalid_argument("gsfluct: field h must be >= 0");
  if (!std::isfinite(D)) throw std::invalid_argument("gsfluct: crystal field D must be finite");
  state_count_ = checked_state_count(S, N, cap);
}

DisorderSample sample_disorder(std::uint64_t seed, int n_sites) {
  DisorderSample out;
  out.seed = seed;
  const std::uint64_t key = rng::derive(seed, rng::kDisorder);
  const std::size_t n_edges = static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2;
  out.couplings.resize(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) out.couplings[e] = rng::gaussian(key, e);
  return out;
}

SpinConfiguration random_configuration(const ModelParams& params, std::uint64_t seed) {
  const std::uint64_t key = rng::derive(seed, rng::kConfigurations);
  SpinConfiguration sigma(static_cast<std::size_t>(params.n_sites));
  for (int i = 0; i < params.n_sites; ++i) {
    sigma[i] = static_cast<int>(rng::below(key, static_cast<std::uint64_t>(i), params.levels())) -
               params.spin_cap;
  }
  return sigma;
}

void check_configuration(const SpinConfiguration& config, const ModelParams& params) {
  if (config.size() != static_cast<std::size_t>(params.n_sites)) {
    throw std::invalid_argument("gsfluct: configuration length does not match N");
  }
  for (int s : config) {
    if (s < -params.spin_cap || s > params.spin_cap) {
      throw std::invalid_argument("gsfluct: spin value outside [-S, S]");
    }
  }
}

OverlapStats overlaps(const SpinConfiguration& a, const SpinConfiguration& b) {
  if (a.size() != b.size()) throw std::invalid_argument("gsfluct: configuration length mismatch");
  const double n = static_cast<double>(a.size());
  long dot = 0;
  long dot_sq = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long>(a[i]) * b[i];
    dot_sq += static_cast<long>(a[i]) * a[i] * b[i] * b[i];
  }
  return OverlapStats{static_cast<double>(dot) / n, static_cast<double>(dot_sq) / (n * n)};
}

double hamiltonian(const SpinConfiguration& config, const DisorderSample& disorder,
                   const ModelParams& params) {
  check_configuration(config, params);
  if (disorder.couplings.size() != params.n_edges()) {
    throw std::invalid_argument("gsfluct: disorder size does not match N");
  }
  const int n = params.n_sites;
  double pair_sum = 0.0;
  std::size_t e = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++e) {
      pair_sum += disorder.couplings[e] * config[i] * config[j];
    }
  }
  long sum_spin = 0, sum_sq = 0;
  for (int s : config) {
    sum_spin += s;
    sum_sq += static_cast<long>(s) * s;
  }
  return params.beta / std::sqrt(static_cast<double>(n)) * pair_sum +
         params.D * static_cast<double>(sum_sq) + params.h * static_cast<double>(sum_spin);
}

EnumHamiltonian EnumHamiltonian::from_disorder(const DisorderSample& disorder,
                                               const ModelParams& params) {
  if (disorder.couplings.size() != params.n_edges()) {
    throw std::invalid_argument("gsfluct: disorder size does not match N");
  }
  EnumHamiltonian ham;
  ham.n = params.n_sites;
  ham.spin_cap = params.spin_cap;
  ham.n_states = params.state_count();
  ham.quad = params.D;
  ham.linear.assign(static_cast<std::size_t>(ham.n), params.h);
  ham.coupling.assign(static_cast<std::size_t>(ham.n) * ham.n, 0.0);
  const double scale = params.beta / std::sqrt(static_cast<double>(ham.n));
  std::size_t e = 0;
  for (int i = 0; i < ham.n; ++i) {
    for (int j = i + 1; j < ham.n; ++j, ++e) {
      ham.set_coupling(i, j, scale * disorder.couplings[e]);
    }
  }
  return ham;
}

double EnumHamiltonian::energy(std::span<const int> sigma) const {
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = coupling.data() + static_cast<std::size_t>(i) * n;
    for (int j = i + 1; j < n; ++j) pair_sum += row[j] * sigma[i] * sigma[j];
  }
  double site_sum = 0.0;
  long sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    site_sum += linear[i] * sigma[i];
    sum_sq += static_cast<long>(sigma[i]) * sigma[i];
  }
  return pair_sum + site_sum + quad * static_cast<double>(sum_sq);
}

double log_partition(const DisorderSample& disorder, const ModelParams& params) {
  const EnumHamiltonian ham = EnumHamiltonian::from_disorder(disorder, params);
  LogSumExp lse;
  for_each_state(ham, [&](const StateView& s) { lse.add(s.energy); });
  return lse.value();
}

CovarianceCheck coupling_covariance_check(const SpinConfiguration& a, const SpinConfiguration& b,
                                          const ModelParams& params) {
  if (a.size() != b.size()) throw std::invalid_argument("gsfluct: configuration length mismatch");
  const int n = static_cast<int>(a.size());
  long cross = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      cross += static_cast<long>(a[i]) * a[j] * b[i] * b[j];
    }
  }
  const double beta_sq = params.beta * params.beta;
  const OverlapStats o = overlaps(a, b);
  CovarianceCheck out;
  out.lhs = beta_sq / static_cast<double>(n) * static_cast<double>(cross);
  out.rhs = beta_sq * static_cast<double>(n) / 2.0 * (o.r * o.r - o.u);
  return out;
}

double GibbsSiteStats::r12_mean() const {
  double sum = 0.0;
  for (double m : site_mean) sum += m * m;
  return sum / static_cast<double>(site_mean.size());
}

double GibbsSiteStats::r12_sq_mean() const {
  const int n = static_cast<int>(site_mean.size());
  if (pair_mean.empty()) throw std::logic_error("gsfluct: pair correlations not accumulated");
  double sum = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++idx) {
      const double c = pair_mean[idx];
      sum += (i == j) ? c * c : 2.0 * c * c;
    }
  }
  return sum / (static_cast<double>(n) * n);
}

GibbsSiteStats gibbs_site_stats(const EnumHamiltonian& ham, bool with_pairs) {
  const int n = ham.n;
  const std::size_t n_pairs = with_pairs ? static_cast<std::size_t>(n) * (n + 1) / 2 : 0;
  // slots: [den, r11, r11^2, site x n, pairs]
  ShiftedAccumulator acc(3 + static_cast<std::size_t>(n) + n_pairs);
  const double inv_n = 1.0 / static_cast<double>(n);
  for_each_state(ham, [&](const StateView& s) {
    const double w = acc.weight(s.energy);
    const double r11 = static_cast<double>(s.sum_sq) * inv_n;
    acc[0] += w;
    acc[1] += w * r11;
    acc[2] += w * r11 * r11;
    for (int i = 0; i < n; ++i) acc[3 + i] += w * s.sigma[i];
    if (with_pairs) {
      std::size_t idx = 3 + static_cast<std::size_t>(n);
      for (int i = 0; i < n; ++i) {
        const double wsi = w * s.sigma[i];
        for (int j = i; j < n; ++j, ++idx) acc[idx] += wsi * s.sigma[j];
      }
    }
  });
  GibbsSiteStats out;
  const double den = acc.slot(0);
  out.log_z = acc.shift() + std::log(den);
  out.r11_mean = acc.slot(1) / den;
  out.r11_sq_mean = acc.slot(2) / den;
  out.site_mean.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.site_mean[i] = acc.slot(3 + i) / den;
  if (with_pairs) {
    out.pair_mean.resize(n_pairs);
    for (std::size_t k = 0; k < n_pairs; ++k) {
      out.pair_mean[k] = acc.slot(3 + static_cast<std::size_t>(n) + k) / den;
    }
  }
  return out;
}

}  // namespace gsfluct
