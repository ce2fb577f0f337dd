#pragma once

#include <cstddef>
#include <vector>

#include "slicing/decision_space.h"
#include "slicing/env_model.h"

namespace slicing {

// Performances within this distance of the maximum are co-optimal.
inline constexpr double kTieTolerance = 1e-12;

struct OracleResult {
  double optimal_performance = 0.0;
  // Every maximizing allocation (sub-actions are expanded for super-action
  // spaces), in space order.
  std::vector<AllocationDecision> optimal_decisions;
  // The hyper-parameter combination shared by the maximizers (that of the
  // first maximizer when they differ).
  HyperCombo optimal_super_action;
  // 0-based indices of the arms of `space` holding a maximizer.
  std::vector<std::size_t> optimal_arms;
};

// Exhaustive search over every allocation of the space at `slot`.
OracleResult oa_oracle(const DecisionSpace& space, const Environment& env,
                       std::size_t slot = 1);

// Per-arm performance at `slot` (an arm's sub-actions share its value).
std::vector<double> arm_performances(const DecisionSpace& space, const Environment& env,
                                     std::size_t slot = 1);

// Best fixed arm in hindsight over slots 1..horizon; optimal_performance is
// its mean per-slot performance. Without a coefficient schedule this is the
// slot-1 oracle.
OracleResult hindsight_oracle(const DecisionSpace& space, const Environment& env,
                              std::size_t horizon);

// Indices of `space` arms whose hyper combo equals `combo`.
std::vector<std::size_t> arms_with_combo(const DecisionSpace& space, const HyperCombo& combo);

// Performance of a fixed allocation over slots 1..horizon. Throws ConfigError
// if the allocation is infeasible.
std::vector<double> fa_policy(const AllocationDecision& fixed, const Environment& env,
                              std::size_t horizon);

}  // namespace slicing
