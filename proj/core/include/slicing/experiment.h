#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "slicing/analytics.h"
#include "slicing/baselines.h"
#include "slicing/config.h"
#include "slicing/decision_space.h"
#include "slicing/env_model.h"
#include "slicing/learner.h"

namespace slicing {

struct SimulationOptions {
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  std::size_t snapshot_cadence = 1;  // 0 disables weight snapshots
};

// Runs the learner over `space` for options.horizon slots. `optimal_arms`
// only feeds the recorded optimal-arm mass; it never influences decisions.
RunTrace simulate(const DecisionSpace& space, const Environment& env, Exp3Learner learner,
                  const SimulationOptions& options,
                  std::span<const std::size_t> optimal_arms = {});

// Arm count the `auto` rate and the regret bound refer to: J' under SBS,
// otherwise the size of the space.
std::size_t effective_arms(const InitScheme& init, std::size_t arms);
double resolve_eta(const EtaSetting& eta, const InitScheme& init, std::size_t arms,
                   std::size_t horizon);

// A configuration with its decision spaces built and its oracle solved.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const Environment& environment() const { return env_; }
  const SpaceBundle& spaces() const { return spaces_; }
  const DecisionSpace& space() const { return spaces_.space(config_.algorithm); }
  // Best fixed arm in hindsight on the selected space.
  const OracleResult& oracle() const { return oracle_; }
  // f^(t)(a*) for t = 1..horizon.
  const std::vector<double>& optimal() const { return optimal_; }
  double eta() const { return eta_; }
  std::size_t snapshot_cadence() const;

  RunTrace run_seed(std::uint64_t seed) const;
  RunTrace run_seed(std::uint64_t seed, double eta, std::size_t snapshot_cadence) const;

 private:
  ExperimentConfig config_;
  Environment env_;
  SpaceBundle spaces_;
  OracleResult oracle_;
  std::vector<double> optimal_;
  double eta_;
};

struct ExperimentSummary {
  std::size_t arms = 0;
  double eta = 0.0;
  double optimal_performance = 0.0;
  double mean_final_average_reward = 0.0;
  double mean_final_cumulative_regret = 0.0;
  double mean_final_prob_optimal = 0.0;
  std::vector<std::filesystem::path> files;
};

// Output directory precedence: explicit override, then $SLICING_OUT_DIR,
// then the config's output_dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config,
                                         const std::string& override_dir = {});

// Writes the space manifest and arm listing.
std::vector<std::filesystem::path> write_space_files(const Experiment& experiment,
                                                     const std::filesystem::path& dir);

// Full run: space files, one RunRecord CSV per seed, the seed average,
// baselines, operation counters and a summary.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& dir);

// Seed-averaged cumulative regret per learning rate plus the analytic bound
// at the optimal rate. Returns the written file.
std::filesystem::path compare_etas(const ExperimentConfig& config,
                                   std::span<const EtaSetting> etas,
                                   const std::filesystem::path& dir);

}  // namespace slicing
