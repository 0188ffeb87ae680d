#include "gsfluct/experiments.hpp"

#include <cmath>

#include "gsfluct/parallel.hpp"
#include "gsfluct/version.hpp"

namespace gsfluct {

void ExperimentConfig::validate() const {
  if (sample_count < 2) throw std::invalid_argument("gsfluct: sample_count must be >= 2");
  for (double u : u_grid) {
    if (!std::isfinite(u)) throw std::invalid_argument("gsfluct: u grid values must be finite");
  }
  if (node_count < 2) throw std::invalid_argument("gsfluct: node_count must be >= 2");
}

EffectiveSummary solve_effective(const ModelParams& params, int node_count, double tol,
                                 int max_iter) {
  FixedPointOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  options.node_count = node_count;
  EffectiveSummary out;
  out.fp = fixed_point_solve(params, options);
  if (!out.fp.converged) {
    throw std::runtime_error("gsfluct: fixed point did not converge; beta may be outside the high-temperature regime");
  }
  out.law = limit_variance(out.fp, params, node_count);
  return out;
}

double centered_free_energy(const DisorderSample& disorder, const FixedPoint& fp,
                            const LimitLaw& law, const ModelParams& params) {
  if (!fp.converged) {
    throw std::invalid_argument("gsfluct: centered_free_energy needs a converged fixed point");
  }
  const double n = static_cast<double>(params.n_sites);
  const double free_energy = log_partition(disorder, params) / n;
  return std::sqrt(n) * (free_energy - law.mean_log_w - law.centering_rate);
}

CLTSummary run_clt_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const EffectiveSummary eff = solve_effective(cfg.params, cfg.node_count, cfg.fp_tol,
                                               cfg.fp_max_iter);
  CLTSummary out;
  out.fp = eff.fp;
  out.law = eff.law;
  out.nu_squared_ref = eff.law.nu_squared;

  const std::size_t m = static_cast<std::size_t>(cfg.sample_count);
  out.samples.resize(m);
  out.log_z.resize(m);
  const double n = static_cast<double>(cfg.params.n_sites);
  parallel_for(m, cfg.workers, [&](std::size_t j) {
    const DisorderSample disorder =
        sample_disorder(rng::sample_seed(cfg.seed, j), cfg.params.n_sites);
    const double log_z = log_partition(disorder, cfg.params);
    out.log_z[j] = log_z;
    out.samples[j] =
        std::sqrt(n) * (log_z / n - eff.law.mean_log_w - eff.law.centering_rate);
  });

  out.mean = mean_se(out.samples);
  out.variance = variance_se(out.samples);
  out.third_abs = third_abs_moment(out.samples);

  out.ecf.reserve(cfg.u_grid.size());
  std::vector<double> re(m), im(m);
  for (double u : cfg.u_grid) {
    for (std::size_t j = 0; j < m; ++j) {
      re[j] = std::cos(u * out.samples[j]);
      im[j] = std::sin(u * out.samples[j]);
    }
    const MeanSE mre = mean_se(re);
    const MeanSE mim = mean_se(im);
    out.ecf.push_back(EcfPoint{u, {mre.mean, mim.mean}, mre.se, mim.se});
  }

  out.degenerate = out.nu_squared_ref <= kDegenerateNuSquared;
  if (out.degenerate) {
    for (double x : out.samples) out.point_mass_max_abs = std::max(out.point_mass_max_abs, std::abs(x));
  } else {
    const double nu = std::sqrt(out.nu_squared_ref);
    std::vector<double> scaled(m);
    for (std::size_t j = 0; j < m; ++j) scaled[j] = out.samples[j] / nu;
    out.ks_statistic = ks_statistic(std::move(scaled), normal_cdf);
  }
  return out;
}

ConcentrationSummary run_concentration_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const EffectiveSummary eff = solve_effective(cfg.params, cfg.node_count, cfg.fp_tol,
                                               cfg.fp_max_iter);
  ConcentrationSummary out;
  out.fp = eff.fp;
  const double s = static_cast<double>(cfg.params.spin_cap);
  out.bound_r12 = 16.0 * s * s;
  out.bound_r11 = 16.0 * s * s * s * s;

  const std::size_t m = static_cast<std::size_t>(cfg.sample_count);
  out.r12_sq_dev.resize(m);
  out.r11_sq_dev.resize(m);
  const double p = eff.fp.p;
  const double q = eff.fp.q;
  parallel_for(m, cfg.workers, [&](std::size_t j) {
    const DisorderSample disorder =
        sample_disorder(rng::sample_seed(cfg.seed, j), cfg.params.n_sites);
    const EnumHamiltonian ham = EnumHamiltonian::from_disorder(disorder, cfg.params);
    const GibbsSiteStats stats = gibbs_site_stats(ham, /*with_pairs=*/true);
    out.r12_sq_dev[j] = stats.r12_sq_mean() - 2.0 * q * stats.r12_mean() + q * q;
    out.r11_sq_dev[j] = stats.r11_sq_mean - 2.0 * p * stats.r11_mean + p * p;
  });

  const double n = static_cast<double>(cfg.params.n_sites);
  const MeanSE m12 = mean_se(out.r12_sq_dev);
  const MeanSE m11 = mean_se(out.r11_sq_dev);
  out.n_times_var_r12 = MeanSE{n * m12.mean, n * m12.se, m12.count};
  out.n_times_var_r11 = MeanSE{n * m11.mean, n * m11.se, m11.count};
  return out;
}

// --- serialization ---------------------------------------------------------

namespace {

nlohmann::json artifact_header(const nlohmann::json& provenance) {
  nlohmann::json j;
  j["generator"] = std::string(kArtifactName);
  j["version"] = std::string(kArtifactVersion);
  j["config"] = provenance;
  return j;
}

}  // namespace

nlohmann::json to_json(const FixedPoint& fp) {
  return nlohmann::json{{"p", fp.p},
                        {"q", fp.q},
                        {"residual", fp.residual},
                        {"iterations", fp.iterations},
                        {"converged", fp.converged},
                        {"oscillating", fp.oscillating}};
}

nlohmann::json to_json(const LimitLaw& law) {
  return nlohmann::json{{"nu_squared", law.nu_squared},
                        {"nu_squared_raw", law.nu_squared_raw},
                        {"var_log_w", law.var_log_w},
                        {"mean_log_w", law.mean_log_w},
                        {"centering_rate", law.centering_rate},
                        {"clamped", law.clamped},
                        {"negative", law.negative}};
}

void write_clt_csv(std::ostream& os, const ExperimentConfig& cfg, const CLTSummary& summary,
                   const nlohmann::json& provenance) {
  os << "# gsfluct-clt-samples v1\n";
  os << "# " << artifact_header(provenance).dump() << "\n";
  os << "index,seed,x_n,log_partition\n";
  for (std::size_t j = 0; j < summary.samples.size(); ++j) {
    os << j << ',' << rng::sample_seed(cfg.seed, j) << ',' << fmt_g17(summary.samples[j]) << ','
       << fmt_g17(summary.log_z[j]) << '\n';
  }
}

void write_concentration_csv(std::ostream& os, const ExperimentConfig& cfg,
                             const ConcentrationSummary& summary,
                             const nlohmann::json& provenance) {
  os << "# gsfluct-concentration-samples v1\n";
  os << "# " << artifact_header(provenance).dump() << "\n";
  os << "index,seed,r12_sq_dev,r11_sq_dev\n";
  for (std::size_t j = 0; j < summary.r12_sq_dev.size(); ++j) {
    os << j << ',' << rng::sample_seed(cfg.seed, j) << ',' << fmt_g17(summary.r12_sq_dev[j])
       << ',' << fmt_g17(summary.r11_sq_dev[j]) << '\n';
  }
}

nlohmann::json clt_summary_json(const ExperimentConfig& cfg, const CLTSummary& summary,
                                const nlohmann::json& provenance) {
  nlohmann::json j = artifact_header(provenance);
  j["kind"] = "clt-summary";
  j["sample_count"] = cfg.sample_count;
  j["fixed_point"] = to_json(summary.fp);
  j["limit_law"] = to_json(summary.law);
  j["nu_squared_ref"] = summary.nu_squared_ref;
  j["moments"] = {
      {"mean", summary.mean.mean},
      {"mean_se", summary.mean.se},
      {"variance", summary.variance.value},
      {"variance_se", summary.variance.se},
      {"third_abs", summary.third_abs.mean},
      {"third_abs_se", summary.third_abs.se},
  };
  nlohmann::json ecf = nlohmann::json::array();
  for (const EcfPoint& pt : summary.ecf) {
    const double target = std::exp(-0.5 * pt.u * pt.u * summary.nu_squared_ref);
    ecf.push_back({{"u", pt.u},
                   {"re", pt.value.real()},
                   {"im", pt.value.imag()},
                   {"se_re", pt.se_re},
                   {"se_im", pt.se_im},
                   {"target_re", target}});
  }
  j["ecf"] = ecf;
  j["degenerate"] = summary.degenerate;
  if (summary.degenerate) {
    j["point_mass_max_abs"] = summary.point_mass_max_abs;
  } else {
    j["ks_statistic"] = *summary.ks_statistic;
  }
  return j;
}

nlohmann::json concentration_summary_json(const ExperimentConfig& cfg,
                                          const ConcentrationSummary& summary,
                                          const nlohmann::json& provenance) {
  nlohmann::json j = artifact_header(provenance);
  j["kind"] = "concentration-summary";
  j["sample_count"] = cfg.sample_count;
  j["fixed_point"] = to_json(summary.fp);
  j["n_times_var_r12"] = {{"value", summary.n_times_var_r12.mean},
                          {"se", summary.n_times_var_r12.se}};
  j["n_times_var_r11"] = {{"value", summary.n_times_var_r11.mean},
                          {"se", summary.n_times_var_r11.se}};
  j["bound_r12"] = summary.bound_r12;
  j["bound_r11"] = summary.bound_r11;
  return j;
}

}  // namespace gsfluct
