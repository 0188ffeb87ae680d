#pragma once

#include <complex>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "gsfluct/effective.hpp"
#include "gsfluct/model.hpp"
#include "gsfluct/stats.hpp"

namespace gsfluct {

/// Below this reference nu^2 the limiting law is treated as a point mass.
inline constexpr double kDegenerateNuSquared = 1e-12;

struct ExperimentConfig {
  ModelParams params;
  int sample_count = 0;  // M
  std::uint64_t seed = 0;
  std::vector<double> u_grid = {0.25, 0.5, 1.0, 2.0};
  int node_count = 64;
  double fp_tol = 1e-12;
  int fp_max_iter = 10000;
  int workers = 0;  // 0 = all hardware threads; never affects results

  void validate() const;
};

struct EffectiveSummary {
  FixedPoint fp;
  LimitLaw law;
};

/// Fixed point and limit law for a parameter set, solved once per experiment.
EffectiveSummary solve_effective(const ModelParams& params, int node_count, double tol,
                                 int max_iter);

/// X_N = sqrt(N) ((1/N) log Z_N - E[log W] - beta^2 (q^2 - p^2)/4).
double centered_free_energy(const DisorderSample& disorder, const FixedPoint& fp,
                            const LimitLaw& law, const ModelParams& params);

struct EcfPoint {
  double u = 0.0;
  std::complex<double> value;
  double se_re = 0.0;
  double se_im = 0.0;
};

struct CLTSummary {
  std::vector<double> samples;  // X_N per disorder sample
  std::vector<double> log_z;    // per-sample diagnostics
  MeanSE mean;
  VarianceEstimate variance;
  MeanSE third_abs;
  std::vector<EcfPoint> ecf;
  std::optional<double> ks_statistic;  // of X/nu against the standard normal
  bool degenerate = false;             // nu^2 at or below the point-mass threshold
  double point_mass_max_abs = 0.0;     // max |X_j| when degenerate
  double nu_squared_ref = 0.0;
  FixedPoint fp;
  LimitLaw law;
};

CLTSummary run_clt_experiment(const ExperimentConfig& cfg);

struct ConcentrationSummary {
  std::vector<double> r12_sq_dev;  // <(R12 - q)^2> per disorder sample
  std::vector<double> r11_sq_dev;  // <(R11 - p)^2>
  MeanSE n_times_var_r12;          // N * disorder average, with SE
  MeanSE n_times_var_r11;
  double bound_r12 = 0.0;  // 16 S^2
  double bound_r11 = 0.0;  // 16 S^4
  FixedPoint fp;
};

ConcentrationSummary run_concentration_experiment(const ExperimentConfig& cfg);

// --- stable output schemas (documented in the README) ---------------------

/// CSV: two '#' header lines (format tag, config echo), then
/// index,seed,x_n,log_partition rows.
void write_clt_csv(std::ostream& os, const ExperimentConfig& cfg, const CLTSummary& summary,
                   const nlohmann::json& provenance);

/// CSV: index,seed,r12_sq_dev,r11_sq_dev rows.
void write_concentration_csv(std::ostream& os, const ExperimentConfig& cfg,
                             const ConcentrationSummary& summary,
                             const nlohmann::json& provenance);

nlohmann::json clt_summary_json(const ExperimentConfig& cfg, const CLTSummary& summary,
                                const nlohmann::json& provenance);

nlohmann::json concentration_summary_json(const ExperimentConfig& cfg,
                                          const ConcentrationSummary& summary,
                                          const nlohmann::json& provenance);

nlohmann::json to_json(const FixedPoint& fp);
nlohmann::json to_json(const LimitLaw& law);

}  // namespace gsfluct
