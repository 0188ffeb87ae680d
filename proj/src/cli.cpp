#include "gsfluct/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gsfluct/experiments.hpp"
#include "gsfluct/interpolation.hpp"
#include "gsfluct/parallel.hpp"
#include "gsfluct/version.hpp"

namespace gsfluct::cli {

namespace {

nlohmann::json header(const RunConfig& cfg) {
  nlohmann::json j;
  j["generator"] = std::string(kArtifactName);
  j["version"] = std::string(kArtifactVersion);
  j["config"] = cfg.provenance();
  return j;
}

void emit(const nlohmann::json& report, const std::string& out, const std::string& suffix) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream os(out + suffix);
  if (!os) throw std::runtime_error("gsfluct: cannot open output file " + out + suffix);
  os << report.dump(2) << "\n";
}

ModelParams params_of(const RunConfig& cfg) {
  return ModelParams(cfg.S, cfg.N, cfg.beta, cfg.h, cfg.D);
}

ExperimentConfig experiment_of(const RunConfig& cfg) {
  ExperimentConfig ex{params_of(cfg), cfg.samples, cfg.seed, cfg.u_grid,
                      cfg.nodes,       cfg.tol,     10000,    cfg.workers};
  return ex;
}

int cmd_fixed_point(const RunConfig& cfg) {
  const ModelParams params = params_of(cfg);
  FixedPointOptions options;
  options.tol = cfg.tol;
  options.node_count = cfg.nodes;
  const FixedPoint fp = fixed_point_solve(params, options);
  nlohmann::json report = header(cfg);
  report["kind"] = "fixed-point";
  report["fixed_point"] = to_json(fp);
  if (fp.converged) {
    report["limit_law"] = to_json(limit_variance(fp, params, cfg.nodes));
  }
  emit(report, cfg.out, ".json");
  if (!fp.converged) {
    std::cerr << "gsfluct: fixed point did not converge (residual " << fp.residual
              << " after " << fp.iterations << " iterations"
              << (fp.oscillating ? ", oscillating" : "") << ")\n";
    return 1;
  }
  return 0;
}

int cmd_clt(const RunConfig& cfg) {
  const ExperimentConfig ex = experiment_of(cfg);
  const CLTSummary summary = run_clt_experiment(ex);
  nlohmann::json report = clt_summary_json(ex, summary, cfg.provenance());

  bool ok = true;
  if (cfg.check) {
    const double allowance = 1.0 / std::sqrt(static_cast<double>(cfg.N));
    nlohmann::json checks;
    const double mean_band = 3.0 * summary.mean.se + allowance;
    checks["mean"] = {{"value", summary.mean.mean}, {"band", mean_band},
                      {"pass", std::abs(summary.mean.mean) <= mean_band}};
    ok = ok && std::abs(summary.mean.mean) <= mean_band;
    const double var_band = 3.0 * summary.variance.se + allowance;
    const double var_gap = std::abs(summary.variance.value - summary.nu_squared_ref);
    checks["variance"] = {{"value", summary.variance.value},
                          {"target", summary.nu_squared_ref},
                          {"band", var_band},
                          {"pass", var_gap <= var_band}};
    ok = ok && var_gap <= var_band;
    nlohmann::json ecf_checks = nlohmann::json::array();
    for (const EcfPoint& pt : summary.ecf) {
      const double target = std::exp(-0.5 * pt.u * pt.u * summary.nu_squared_ref);
      const double gap = std::abs(pt.value - std::complex<double>(target, 0.0));
      const double band = 3.0 * std::hypot(pt.se_re, pt.se_im) + allowance;
      ecf_checks.push_back({{"u", pt.u}, {"gap", gap}, {"band", band}, {"pass", gap <= band}});
      ok = ok && gap <= band;
    }
    checks["ecf"] = ecf_checks;
    report["checks"] = checks;
    report["checks_pass"] = ok;
  }

  emit(report, cfg.out, ".summary.json");
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out + ".samples.csv", std::ios::binary);
    if (!os) throw std::runtime_error("gsfluct: cannot open output file " + cfg.out + ".samples.csv");
    write_clt_csv(os, ex, summary, cfg.provenance());
  }
  return ok ? 0 : 1;
}

int cmd_concentration(const RunConfig& cfg) {
  const ExperimentConfig ex = experiment_of(cfg);
  const ConcentrationSummary summary = run_concentration_experiment(ex);
  nlohmann::json report = concentration_summary_json(ex, summary, cfg.provenance());

  bool ok = true;
  if (cfg.check) {
    const bool pass_r12 =
        summary.n_times_var_r12.mean + 3.0 * summary.n_times_var_r12.se <= summary.bound_r12;
    const bool pass_r11 =
        summary.n_times_var_r11.mean + 3.0 * summary.n_times_var_r11.se <= summary.bound_r11;
    report["checks"] = {{"r12_bound_pass", pass_r12}, {"r11_bound_pass", pass_r11}};
    ok = pass_r12 && pass_r11;
    report["checks_pass"] = ok;
  }

  emit(report, cfg.out, ".summary.json");
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out + ".samples.csv", std::ios::binary);
    if (!os) throw std::runtime_error("gsfluct: cannot open output file " + cfg.out + ".samples.csv");
    write_concentration_csv(os, ex, summary, cfg.provenance());
  }
  return ok ? 0 : 1;
}

int cmd_identities(const RunConfig& cfg) {
  const ModelParams params = params_of(cfg);
  FixedPointOptions options;
  options.tol = cfg.tol;
  options.node_count = cfg.nodes;
  const FixedPoint fp = fixed_point_solve(params, options);
  if (!fp.converged) {
    std::cerr << "gsfluct: fixed point did not converge; cannot run identity checks\n";
    return 1;
  }
  nlohmann::json report = header(cfg);
  report["kind"] = "identities";
  report["fixed_point"] = to_json(fp);
  bool ok = true;

  // Endpoint reconstruction: H_1 == H_N with g = B[1], plus the trivial
  // zero-configuration case which must be exactly zero.
  {
    const PathGrid grid(std::max(4, cfg.steps / 16));
    const SpinConfiguration zeros(static_cast<std::size_t>(cfg.N), 0);
    const InterpolationPath zero_path = sample_path(params, grid, rng::sample_seed(cfg.seed, 0));
    const EndpointCheck zero_check = endpoint_identity_check(zeros, zero_path, fp, params);
    double max_rel = 0.0;
    const int pairs = 100;
    for (int i = 0; i < pairs; ++i) {
      const std::uint64_t s = rng::sample_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1);
      const InterpolationPath path = sample_path(params, grid, s);
      const SpinConfiguration config = random_configuration(params, s);
      const EndpointCheck chk = endpoint_identity_check(config, path, fp, params);
      max_rel = std::max(max_rel, chk.residual / (1.0 + std::abs(chk.h_n)));
    }
    const bool pass = max_rel <= 1e-9 && zero_check.residual == 0.0;
    report["endpoint"] = {{"pairs", pairs},
                          {"max_relative_residual", max_rel},
                          {"zero_config_residual", zero_check.residual},
                          {"pass", pass}};
    ok = ok && pass;
  }

  // Drift rearrangement: algebraic identity on random tuples.
  {
    const std::uint64_t key = rng::derive(cfg.seed, rng::kTuples);
    double max_rel = 0.0;
    const int tuples = 10000;
    for (int i = 0; i < tuples; ++i) {
      double v[8];
      for (int k = 0; k < 8; ++k) {
        v[k] = 4.0 * rng::uniform_open(rng::at(key, static_cast<std::uint64_t>(i) * 8 + k)) - 2.0;
      }
      const DriftCheck chk =
          drift_rearrangement_check(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]);
      max_rel = std::max(max_rel, std::abs(chk.lhs - chk.rhs) / (1.0 + std::abs(chk.lhs)));
    }
    const DriftCheck zero = drift_rearrangement_check(0, 0, 0, 0, fp.p, fp.q, params.beta,
                                                      static_cast<double>(cfg.N));
    const bool pass = max_rel <= 1e-12 && zero.lhs == zero.rhs;
    report["drift_rearrangement"] = {{"tuples", tuples},
                                     {"max_relative_gap", max_rel},
                                     {"pass", pass}};
    ok = ok && pass;
  }

  // Quadratic variation: RMS gap between the empirical cross-variation and
  // the analytic rate scales like K^{-1/2}.
  {
    if (cfg.steps % 16 != 0) throw std::runtime_error("gsfluct: --steps must be divisible by 16");
    const std::vector<int> sweep = {cfg.steps / 16, cfg.steps / 4, cfg.steps};
    const int paths = 1000;
    std::vector<double> ks, rms;
    for (int k_steps : sweep) {
      const PathGrid grid(k_steps);
      std::vector<double> sq_gap(paths);
      parallel_for(static_cast<std::size_t>(paths), cfg.workers, [&](std::size_t i) {
        const std::uint64_t s = rng::sample_seed(cfg.seed ^ 0x5159u, i);
        const InterpolationPath path = sample_path(params, grid, s);
        const SpinConfiguration c1 = random_configuration(params, s);
        const SpinConfiguration c2 = random_configuration(params, rng::mix64(s));
        const QvEstimate est = quadratic_variation_estimate(c1, c2, path, fp, params);
        sq_gap[i] = (est.empirical - est.analytic) * (est.empirical - est.analytic);
      });
      double mean_sq = 0.0;
      for (double g : sq_gap) mean_sq += g;
      mean_sq /= static_cast<double>(paths);
      ks.push_back(static_cast<double>(k_steps));
      rms.push_back(std::sqrt(mean_sq));
    }
    const double slope = loglog_slope(ks, rms);
    const bool pass = slope >= -0.65 && slope <= -0.35;
    report["quadratic_variation"] = {{"grid_steps", sweep},
                                     {"rms_gap", rms},
                                     {"slope", slope},
                                     {"pass", pass}};
    ok = ok && pass;
  }

  // Gaussian integration by parts at t = 1/2.
  {
    const PathGrid grid(std::max(4, cfg.steps / 16));
    const IbpEstimate est =
        ibp_identity_estimate(params, fp, 0.5, cfg.samples, grid, cfg.seed, cfg.workers);
    const double gap = std::abs(est.lhs.mean - est.rhs.mean);
    const double band = 3.0 * (est.lhs.se + est.rhs.se);
    const bool pass = gap <= band;
    report["gaussian_ibp"] = {{"samples", cfg.samples},
                              {"lhs", est.lhs.mean},
                              {"lhs_se", est.lhs.se},
                              {"rhs", est.rhs.mean},
                              {"rhs_se", est.rhs.se},
                              {"gap", gap},
                              {"band", band},
                              {"pass", pass}};
    ok = ok && pass;
  }

  report["checks_pass"] = ok;
  emit(report, cfg.out, ".json");
  return ok ? 0 : 1;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->set_help_flag("--help", "Print help");  // frees -h / --h for the field flag
  sub->fallthrough();                          // lets --config appear after the subcommand
  sub->add_option("--S", cfg.S, "Spin cap S (spins in {0,±1,…,±S})")->check(CLI::PositiveNumber);
  sub->add_option("--N", cfg.N, "System size N")->check(CLI::PositiveNumber);
  sub->add_option("--beta", cfg.beta, "Inverse temperature")->check(CLI::NonNegativeNumber);
  sub->add_option("--h", cfg.h, "External field")->check(CLI::NonNegativeNumber);
  sub->add_option("--D", cfg.D, "Crystal field");
  sub->add_option("--samples", cfg.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  sub->add_option("--steps", cfg.steps, "Path grid steps K")->check(CLI::PositiveNumber);
  sub->add_option("--nodes", cfg.nodes, "Gauss-Hermite node count")->check(CLI::PositiveNumber);
  sub->add_option("--tol", cfg.tol, "Fixed-point tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "Master seed");
  sub->add_option("--u", cfg.u_grid, "Characteristic-function evaluation points");
  sub->add_option("--out", cfg.out, "Output path prefix (default: summary to stdout)");
  sub->add_option("--workers", cfg.workers, "Worker threads (0 = all)")
      ->envname("GSFLUCT_WORKERS");
  sub->add_flag("--check", cfg.check, "Exit nonzero unless acceptance bands pass");
}

}  // namespace

nlohmann::json RunConfig::provenance() const {
  // workers/check excluded: execution details never change the numbers.
  return nlohmann::json{{"S", S},
                        {"N", N},
                        {"beta", beta},
                        {"h", h},
                        {"D", D},
                        {"samples", samples},
                        {"steps", steps},
                        {"nodes", nodes},
                        {"tol", tol},
                        {"seed", seed},
                        {"u", u_grid},
                        {"out", out}};
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Ghatak-Sherrington free-energy fluctuation laboratory"};
  app.set_help_flag("--help", "Print help");
  app.set_version_flag("--version", std::string(kArtifactName) + " " + std::string(kArtifactVersion));
  app.set_config("--config", "", "Config file (key = value, [subcommand] sections)");
  app.require_subcommand(1);

  RunConfig fixed_cfg, clt_cfg, conc_cfg, ident_cfg;
  clt_cfg.N = 8;
  conc_cfg.N = 8;
  ident_cfg.N = 6;
  ident_cfg.samples = 10000;

  CLI::App* fixed = app.add_subcommand("fixed-point", "Solve the (p, q) fixed point and limit law");
  add_common_options(fixed, fixed_cfg);
  CLI::App* clt = app.add_subcommand("clt", "Centered free-energy CLT experiment");
  add_common_options(clt, clt_cfg);
  CLI::App* conc = app.add_subcommand("concentration", "Overlap concentration experiment");
  add_common_options(conc, conc_cfg);
  CLI::App* ident = app.add_subcommand("identities", "Interpolation identity checks");
  add_common_options(ident, ident_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fixed->parsed()) return cmd_fixed_point(fixed_cfg);
    if (clt->parsed()) return cmd_clt(clt_cfg);
    if (conc->parsed()) return cmd_concentration(conc_cfg);
    if (ident->parsed()) return cmd_identities(ident_cfg);
  } catch (const std::exception& e) {
    std::cerr << "gsfluct: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gsfluct::cli
