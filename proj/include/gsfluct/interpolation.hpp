#pragma once

#include "gsfluct/effective.hpp"
#include "gsfluct/model.hpp"
#include "gsfluct/stats.hpp"

namespace gsfluct {

/// Uniform grid t_k = k/K on [0, 1].
struct PathGrid {
  int steps = 0;   // K
  double dt = 0.0; // 1/K
  std::vector<double> times;  // K+1 points

  explicit PathGrid(int k);
  int index_of(double t) const;  // grid index of t; throws if t is off-grid
};

/// One realization of the two driving Brownian families on a grid: per-edge
/// increments of B_ij, full per-site paths B_i (B_i[0] = 0), and the endpoint
/// Gaussians eta_i = B_i[1]. The reversed process is read off by index
/// reversal, W_i[t_k] = B_i[t_{K-k}], so W_i[0] = eta_i and W_i[1] = 0.
struct InterpolationPath {
  int n_sites = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::vector<double> edge_increments;  // [edge * K + k]
  std::vector<double> site_paths;       // [site * (K+1) + k]
  std::vector<double> eta;              // per site

  double edge_increment(std::size_t edge, int k) const {
    return edge_increments[edge * static_cast<std::size_t>(steps) + k];
  }
  double site_value(int site, int k) const {
    return site_paths[static_cast<std::size_t>(site) * (steps + 1) + k];
  }
  double reversed_site(int site, int k) const { return site_value(site, steps - k); }
  /// B_ij[t_k]: prefix sum of the edge increments.
  double edge_value(std::size_t edge, int k) const;
};

InterpolationPath sample_path(const ModelParams& params, const PathGrid& grid,
                              std::uint64_t seed);

/// H_t along a path for a fixed configuration, split into its initial value,
/// accumulated martingale part (edge + reversed-site increments) and
/// accumulated drift part. values[k] = initial + martingale[k] + drift[k]
/// holds bit-exactly by construction.
struct HamiltonianPath {
  double initial = 0.0;  // H_0(sigma)
  std::vector<double> values;
  std::vector<double> martingale_part;
  std::vector<double> drift_part;
};

HamiltonianPath hamiltonian_path(const SpinConfiguration& config, const InterpolationPath& path,
                                 const FixedPoint& fp, const ModelParams& params);

struct EndpointCheck {
  double residual = 0.0;  // |H_1 - H_N(sigma; g = B[1])|
  double h_n = 0.0;
};

/// The reconstruction identity: at t = 1 the interpolated Hamiltonian equals
/// the full Hamiltonian with couplings g_ij = B_ij[1].
EndpointCheck endpoint_identity_check(const SpinConfiguration& config,
                                      const InterpolationPath& path, const FixedPoint& fp,
                                      const ModelParams& params);

struct QvEstimate {
  double empirical = 0.0;  // sum_k dH(sigma) dH(tau) over the grid
  double analytic = 0.0;   // beta^2 N/2 (R^2 - U) + beta^2 q N R
};

/// Cross-variation of the interpolated Hamiltonians of two configurations on
/// one path; config1 == config2 gives the self (1,1) specialization.
QvEstimate quadratic_variation_estimate(const SpinConfiguration& config1,
                                        const SpinConfiguration& config2,
                                        const InterpolationPath& path, const FixedPoint& fp,
                                        const ModelParams& params);

struct DriftCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both routes through the drift rearrangement of d log Z_t:
///   lhs = -b2 N/2 (p-q) R11 + b2 N/4 (R11^2 - U11) + b2 N/2 q R11
///         - b2 N/4 (R12^2 - U12) - b2 N/2 q R12          (b2 = beta^2)
///   rhs = b2 N/4 [(R11-p)^2 - (R12-q)^2 + q^2 - p^2 + U12 - U11]
///         + b2 q N (R11 - R12)
DriftCheck drift_rearrangement_check(double r11, double r12, double u11, double u12, double p,
                                     double q, double beta, double n);

struct IbpEstimate {
  MeanSE lhs;  // beta sqrt(q) sum_i <s_i>_t W_i[t] / (1 - t)
  MeanSE rhs;  // beta^2 q N <R11 - R12>_t
};

/// Monte Carlo two-sided estimate of the Gaussian integration-by-parts
/// identity at an interior grid time t, with exact Gibbs averages under H_t.
IbpEstimate ibp_identity_estimate(const ModelParams& params, const FixedPoint& fp, double t,
                                  int sample_count, const PathGrid& grid, std::uint64_t seed,
                                  int workers = 0);

/// H_t at a fixed grid index as an enumeration Hamiltonian:
/// couplings beta B_ij[t]/sqrt(N), site fields beta sqrt(q) W_i[t] + h,
/// quadratic weight beta^2/2 (p-q)(1-t) + D.
EnumHamiltonian interpolated_hamiltonian(const InterpolationPath& path, int k,
                                         const FixedPoint& fp, const ModelParams& params);

}  // namespace gsfluct
