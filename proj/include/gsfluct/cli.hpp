#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gsfluct::cli {

/// Knobs shared by all subcommands. Mirrors the command-line flags; the
/// provenance echo embedded in every output excludes execution-only fields
/// (workers, check) so identical runs produce identical bytes regardless of
/// parallelism.
struct RunConfig {
  int S = 1;
  int N = 8;
  double beta = 0.2;
  double h = 0.3;
  double D = 0.05;
  int samples = 200;
  int steps = 1024;
  int nodes = 64;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  std::vector<double> u_grid = {0.25, 0.5, 1.0, 2.0};
  std::string out;
  int workers = 0;
  bool check = false;

  nlohmann::json provenance() const;
};

int run_cli(int argc, const char* const* argv);

}  // namespace gsfluct::cli
