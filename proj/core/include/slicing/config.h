#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slicing/decision_space.h"
#include "slicing/env_model.h"
#include "slicing/learner.h"

namespace slicing {

// Numeric learning rate, or `auto` for the bound-minimizing rate.
struct EtaSetting {
  bool automatic = false;
  double value = 0.0;

  static EtaSetting fixed(double v) { return {false, v}; }
  static EtaSetting optimal() { return {true, 0.0}; }
};

// Parses "auto" or a number in (0, 1).
EtaSetting parse_eta(std::string_view token);
std::string to_string(const EtaSetting& eta);

struct BaselineSelection {
  bool oa = true;
  std::optional<AllocationDecision> fa;
};

struct ExperimentConfig {
  std::vector<ModelSpec> models;
  ResourcePool pool;
  Environment::CoeffSchedule coeff_schedule;
  Grids grids;
  Algorithm algorithm = Algorithm::kOlsRsa;
  EtaSetting eta = EtaSetting::optimal();
  InitScheme init;
  std::size_t horizon = 1;
  std::vector<std::uint64_t> seeds;
  BaselineSelection baselines;
  std::string output_dir = "out";
  // Unset: every slot for J <= 1000, every 10th beyond. 0 disables snapshots.
  std::optional<std::size_t> snapshot_cadence;

  Environment environment() const { return Environment(models, pool, coeff_schedule); }
};

// Parses and validates a JSON experiment description. Every violation is
// reported with its field path in one ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace slicing
