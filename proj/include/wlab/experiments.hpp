#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wlab/cone.hpp"

namespace wlab {

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Flat parameter set shared by every experiment; each experiment reads the
/// keys it needs.
struct ExperimentConfig {
  std::string experiment;
  double alpha = 0.5;
  std::optional<int> p;  // empty means the dimension threshold
  int jobs = 1;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;

  // curvature-scan
  double r_min = 1e-3;
  double r_max = 1e4;
  int grid_points = 500;

  // growth, lemma-bounds
  std::int64_t l_min = 100;
  std::int64_t l_max = 1'000'000;
  int per_decade = 8;
  std::int64_t fit_min = 1000;
  std::int64_t fit_max = 1'000'000;
  double slope_tol = 0.03;

  // far-loop
  std::vector<double> s_list{1e3, 1e4};
  std::vector<double> eps_list{0.3, 0.1, 0.03, 0.01};

  // orbit-dimension
  std::int64_t L_ref = 10'000'000;
  int n_samples = 200;
  int n_deltas = 16;
  double delta_max = 0.3;
  double dimension_tol = 0.1;
  bool stability = true;  // also build with 2 L_ref

  // halfline
  std::vector<double> scales{1e3, 1e4, 1e5};
  HalflineOptions halfline;
  double halfline_tol = 1e-2;

  // flatness
  double flat_s = 1e3;
  std::vector<double> rho_list{0.1, 0.05, 0.025};
  int flat_points = 64;

  // oracle-check
  std::vector<std::int64_t> oracle_l{1, 3, 10, 20};
  std::int64_t oracle_nodes = 4'000'000;
  int stencil = 16;
  double oracle_tol = 0.03;

  /// Resolved sphere parameter (threshold when p is empty).
  int resolved_p() const;
  WarpParams params() const { return WarpParams{alpha, resolved_p()}; }
};

/// One checked statement with its anchor text.
struct Assertion {
  std::string claim;
  std::string paper_ref;
  bool pass = false;
  nlohmann::json details;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Assertion> assertions;
  std::vector<std::filesystem::path> files;
  bool pass() const;
};

/// Runs one experiment, writing its CSV/JSON artifacts and summary.json into
/// config.out_dir. Throws PreconditionError/DomainError on invalid input and
/// SolverError on numerical failure.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitUsage = 2, kExitSolver = 3 };

}  // namespace wlab
