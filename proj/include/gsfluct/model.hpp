#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gsfluct/rng.hpp"

namespace gsfluct {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 31;

/// Parameters of the Ghatak-Sherrington model. Spins take values in
/// {0, +-1, ..., +-S} on N sites; beta is the inverse temperature, h the
/// external field and D the crystal field coupling to sigma^2.
struct ModelParams {
  int spin_cap = 1;  // S
  int n_sites = 1;   // N
  double beta = 0.0;
  double h = 0.0;
  double D = 0.0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  ModelParams(int S, int N, double beta_, double h_, double D_,
              std::uint64_t cap = kDefaultEnumerationCap);

  int levels() const { return 2 * spin_cap + 1; }
  std::uint64_t state_count() const { return state_count_; }
  std::size_t n_edges() const {
    return static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2;
  }

 private:
  std::uint64_t state_count_ = 0;
};

using SpinConfiguration = std::vector<int>;

/// Gaussian couplings g_ij for i<j, stored row-major along the strict upper
/// triangle, together with the seed that generated them.
struct DisorderSample {
  std::vector<double> couplings;
  std::uint64_t seed = 0;
};

inline std::size_t edge_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

/// i.i.d. standard Gaussian couplings, addressable per edge from `seed`.
DisorderSample sample_disorder(std::uint64_t seed, int n_sites);

/// Uniform random configuration in {-S..S}^N.
SpinConfiguration random_configuration(const ModelParams& params, std::uint64_t seed);

struct OverlapStats {
  double r = 0.0;  // R = (1/N) sum_i s1_i s2_i
  double u = 0.0;  // U = (1/N^2) sum_i s1_i^2 s2_i^2
};

OverlapStats overlaps(const SpinConfiguration& a, const SpinConfiguration& b);

/// H(sigma) = beta/sqrt(N) sum_{i<j} g_ij s_i s_j + D sum s_i^2 + h sum s_i.
double hamiltonian(const SpinConfiguration& config, const DisorderSample& disorder,
                   const ModelParams& params);

/// log sum_sigma exp(H(sigma)), streaming max-shifted enumeration.
double log_partition(const DisorderSample& disorder, const ModelParams& params);

struct CovarianceCheck {
  double lhs = 0.0;  // beta^2/N sum_{i<j} s1_i s1_j s2_i s2_j
  double rhs = 0.0;  // beta^2 N / 2 (R^2 - U)
};

/// Both sides of the disorder covariance identity for the coupling part of H.
CovarianceCheck coupling_covariance_check(const SpinConfiguration& a,
                                          const SpinConfiguration& b,
                                          const ModelParams& params);

// ---------------------------------------------------------------------------
// Generalized enumeration Hamiltonian
//
//   H(sigma) = sum_{i<j} J_ij s_i s_j + sum_i a_i s_i + d sum_i s_i^2
//
// covers both H_N (J = beta g / sqrt(N), a = h, d = D) and the interpolated
// Hamiltonian at a fixed time.
// ---------------------------------------------------------------------------

struct EnumHamiltonian {
  int n = 0;
  int spin_cap = 0;
  std::uint64_t n_states = 0;
  double quad = 0.0;             // d
  std::vector<double> linear;    // a_i
  std::vector<double> coupling;  // n*n symmetric matrix, zero diagonal

  static EnumHamiltonian from_disorder(const DisorderSample& disorder,
                                       const ModelParams& params);

  double coupling_at(int i, int j) const { return coupling[static_cast<std::size_t>(i) * n + j]; }
  void set_coupling(int i, int j, double v) {
    coupling[static_cast<std::size_t>(i) * n + j] = v;
    coupling[static_cast<std::size_t>(j) * n + i] = v;
  }

  /// Direct evaluation (deterministic i<j order); reference for the
  /// incremental path used by for_each_state.
  double energy(std::span<const int> sigma) const;
};

struct StateView {
  std::span<const int> sigma;
  double energy = 0.0;
  long sum_spin = 0;  // sum s_i
  long sum_sq = 0;    // sum s_i^2
};

/// Enumerates all (2S+1)^n configurations in mixed-radix counter order
/// (digit set -S..S, site 0 fastest) and calls visit(StateView) for each.
/// The energy is updated incrementally per digit change and refreshed from
/// scratch every kEnergyRefreshInterval states to bound rounding drift.
inline constexpr std::uint64_t kEnergyRefreshInterval = 1024;

template <class Visitor>
void for_each_state(const EnumHamiltonian& ham, Visitor&& visit) {
  const int n = ham.n;
  const int cap = ham.spin_cap;
  std::vector<int> sigma(static_cast<std::size_t>(n), -cap);
  double energy = ham.energy(sigma);
  long sum_spin = -static_cast<long>(n) * cap;
  long sum_sq = static_cast<long>(n) * cap * cap;

  const std::uint64_t total = ham.n_states;
  for (std::uint64_t idx = 0;; ++idx) {
    if (idx != 0 && idx % kEnergyRefreshInterval == 0) energy = ham.energy(sigma);
    visit(StateView{std::span<const int>(sigma), energy, sum_spin, sum_sq});
    if (idx + 1 == total) break;
    for (int k = 0;; ++k) {
      const int old_v = sigma[k];
      const int new_v = (old_v == cap) ? -cap : old_v + 1;
      const double* row = ham.coupling.data() + static_cast<std::size_t>(k) * n;
      double field = 0.0;
      for (int j = 0; j < n; ++j) field += row[j] * sigma[j];
      const int dv = new_v - old_v;
      const int dsq = new_v * new_v - old_v * old_v;
      energy += dv * field + ham.linear[k] * dv + ham.quad * dsq;
      sum_spin += dv;
      sum_sq += dsq;
      sigma[k] = new_v;
      if (new_v != -cap) break;
    }
  }
}

/// Streaming max-shifted log-sum-exp with Kahan-compensated accumulation.
class LogSumExp {
 public:
  void add(double x) {
    if (x > shift_) {
      const double scale = std::isinf(shift_) ? 0.0 : std::exp(shift_ - x);
      sum_ *= scale;
      carry_ *= scale;
      shift_ = x;
    }
    const double term = std::exp(x - shift_);
    const double y = term - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return shift_ + std::log(sum_); }

 private:
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Family of weighted sums sum_sigma f_k(sigma) exp(H - shift) under a shared
/// running max shift. Ratios of slots are Gibbs averages.
class ShiftedAccumulator {
 public:
  explicit ShiftedAccumulator(std::size_t slots) : acc_(slots, 0.0) {}

  // Returns exp(H - shift) after updating the shared shift.
  double weight(double energy) {
    if (energy > shift_) {
      const double scale = std::isinf(shift_) ? 0.0 : std::exp(shift_ - energy);
      for (double& a : acc_) a *= scale;
      shift_ = energy;
    }
    return std::exp(energy - shift_);
  }

  double& operator[](std::size_t i) { return acc_[i]; }
  double slot(std::size_t i) const { return acc_[i]; }
  double shift() const { return shift_; }
  std::size_t size() const { return acc_.size(); }

 private:
  std::vector<double> acc_;
  double shift_ = -std::numeric_limits<double>::infinity();
};

/// Exact single-pass Gibbs summary of the measure exp(H)/Z: per-site means,
/// optional pair correlations, and the self-overlap moments.
struct GibbsSiteStats {
  double log_z = 0.0;
  std::vector<double> site_mean;  // <s_i>
  std::vector<double> pair_mean;  // <s_i s_j>, packed i<=j incl. diagonal
  double r11_mean = 0.0;          // <R_{1,1}>
  double r11_sq_mean = 0.0;       // <R_{1,1}^2>

  double pair(int i, int j, int n) const {
    if (i > j) std::swap(i, j);
    const std::size_t idx =
        static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
    return pair_mean[idx];
  }
  /// <R_{1,2}> over two independent replicas of the same measure.
  double r12_mean() const;
  /// <R_{1,2}^2>; requires pair correlations.
  double r12_sq_mean() const;
};

GibbsSiteStats gibbs_site_stats(const EnumHamiltonian& ham, bool with_pairs);

/// Exact single-replica Gibbs average of a configuration observable.
template <class F>
double gibbs_expectation(F&& observable, const DisorderSample& disorder,
                         const ModelParams& params) {
  const EnumHamiltonian ham = EnumHamiltonian::from_disorder(disorder, params);
  ShiftedAccumulator acc(2);
  for_each_state(ham, [&](const StateView& s) {
    const double w = acc.weight(s.energy);
    acc[0] += w;
    acc[1] += w * observable(s.sigma);
  });
  return acc.slot(1) / acc.slot(0);
}

/// Exact two-replica Gibbs average <f(sigma, tau)> by double enumeration.
/// Quadratic in the state count; intended for small systems and oracles.
template <class F>
double gibbs_pair_expectation(F&& observable, const DisorderSample& disorder,
                              const ModelParams& params) {
  const EnumHamiltonian ham = EnumHamiltonian::from_disorder(disorder, params);
  if (ham.n_states > (std::uint64_t{1} << 14)) {
    throw std::invalid_argument("gsfluct: two-replica enumeration limited to 2^14 states");
  }
  const std::size_t v = static_cast<std::size_t>(ham.n_states);
  std::vector<int> configs(v * ham.n);
  std::vector<double> energies(v);
  std::size_t k = 0;
  LogSumExp lse;
  for_each_state(ham, [&](const StateView& s) {
    std::copy(s.sigma.begin(), s.sigma.end(), configs.begin() + k * ham.n);
    energies[k] = s.energy;
    lse.add(s.energy);
    ++k;
  });
  const double log_z = lse.value();
  double num = 0.0, carry = 0.0;
  for (std::size_t a = 0; a < v; ++a) {
    const double wa = std::exp(energies[a] - log_z);
    const std::span<const int> sa(configs.data() + a * ham.n, static_cast<std::size_t>(ham.n));
    for (std::size_t b = 0; b < v; ++b) {
      const double w = wa * std::exp(energies[b] - log_z);
      const std::span<const int> sb(configs.data() + b * ham.n, static_cast<std::size_t>(ham.n));
      const double y = w * observable(sa, sb) - carry;
      const double t = num + y;
      carry = (t - num) - y;
      num = t;
    }
  }
  return num;
}

void check_configuration(const SpinConfiguration& config, const ModelParams& params);

}  // namespace gsfluct
