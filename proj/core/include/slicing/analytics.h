#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slicing/baselines.h"
#include "slicing/decision_space.h"
#include "slicing/env_model.h"

namespace slicing {

struct SlotRecord {
  std::size_t selected_index = 0;  // 0-based arm index
  AllocationDecision decision;
  double performance = 0.0;
  double loss = 0.0;
  std::vector<double> accuracies;  // clamped q_i
  double optimal_mass = 0.0;       // probability on the optimal arms after the update
};

// Everything observed during one seeded run. Snapshot k holds the weights
// after the update of slot snapshot_slots[k] (1-based).
struct RunTrace {
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kOls;
  double eta = 0.0;
  std::vector<SlotRecord> slots;
  std::vector<double> initial_weights;
  std::vector<double> final_weights;
  std::vector<std::size_t> snapshot_slots;
  std::vector<std::vector<double>> snapshots;

  std::size_t horizon() const { return slots.size(); }
};

// Every slot for J <= 1000 arms, every 10th slot beyond that.
std::size_t default_snapshot_cadence(std::size_t arms);

// f^(t)(a*) for t = 1..horizon, with a* the oracle's first maximizer.
std::vector<double> optimal_series(const OracleResult& oracle, const Environment& env,
                                   std::size_t horizon);

std::vector<double> cumulative_regret(const RunTrace& trace, std::span<const double> optimal);
std::vector<double> average_regret(const RunTrace& trace, std::span<const double> optimal);
std::vector<double> average_reward(const RunTrace& trace);

// Slot 0 is the initial distribution; later entries follow the snapshots.
struct ProbabilitySeries {
  std::vector<std::size_t> slots;
  std::vector<double> values;
};

// Probability mass on the oracle's optimal arms (computed on the same space
// the trace ran on). Throws UnavailableError when no snapshots were kept.
ProbabilitySeries optimal_probability(const RunTrace& trace, const OracleResult& oracle);

struct OpCounters {
  std::uint64_t prelearn_ops = 0;
  std::uint64_t learn_ops_per_slot = 0;
};

// One weight update per arm per slot.
OpCounters count_ops(const PrelearnCounters& prelearn, const DecisionSpace& space);

// prelearn_ops + t * learn_ops_per_slot for t = 0..horizon.
std::vector<std::uint64_t> cumulative_complexity(const OpCounters& counters,
                                                 std::size_t horizon);

// Element-wise mean of equally long series.
std::vector<double> mean_series(std::span<const std::vector<double>> series);

}  // namespace slicing
