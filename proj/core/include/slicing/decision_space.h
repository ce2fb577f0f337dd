#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slicing/env_model.h"

namespace slicing {

// Discretization of one model's decision variables. All grids ascending.
struct ModelGrid {
  std::vector<double> l;
  std::vector<int> m;
  std::vector<double> psi;
  std::vector<double> lambda;
};

struct Grids {
  std::vector<ModelGrid> per_model;
};

// Throws ConfigError listing every violated grid invariant.
void validate_grids(const Grids& grids, const Environment& env);

struct HyperChoice {
  std::uint16_t l_idx = 0;
  std::uint16_t m_idx = 0;
  double l = 0.0;
  int m = 0;
};

// (l_i, m_i) for every model.
struct HyperCombo {
  std::vector<HyperChoice> per_model;
};

struct ResourceChoice {
  std::uint16_t psi_idx = 0;
  std::uint16_t lambda_idx = 0;
  double psi = 0.0;
  double lambda = 0.0;
};

// (psi_i, lambda_i) for every model.
struct ResourceCombo {
  std::vector<ResourceChoice> per_model;
};

AllocationDecision make_decision(const HyperCombo& hyper, const ResourceCombo& res);

enum class Algorithm { kOls, kOlsSa, kOlsRsa };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view token);

// Materialized super action: every sub-action shares `combo`.
struct SuperAction {
  HyperCombo combo;
  std::vector<AllocationDecision> subs;
};

// Work done while building a space, in abstract "major operation" units.
struct PrelearnCounters {
  std::uint64_t constraint_checks = 0;
  std::uint64_t merge_insertions = 0;
  std::uint64_t candidacy_comparisons = 0;

  std::uint64_t total() const {
    return constraint_checks + merge_insertions + candidacy_comparisons;
  }
};

// An ordered arm set. Every arm is a hyper-parameter combination plus one
// (OLS) or more (OLS-SA, OLS-RSA) feasible resource combinations. Arms are
// stored compactly as indices into shared combo tables; decisions are
// materialized on demand. Indices are 0-based.
class DecisionSpace {
 public:
  struct Tables {
    std::vector<HyperCombo> hyper;
    std::vector<ResourceCombo> resources;  // feasible resource combos
  };

  DecisionSpace(Algorithm kind, std::shared_ptr<const Tables> tables,
                std::vector<std::uint32_t> arm_combo,
                std::vector<std::uint32_t> sub_offsets,
                std::vector<std::uint32_t> sub_resources);

  Algorithm kind() const { return kind_; }
  std::size_t size() const { return arm_combo_.size(); }
  bool empty() const { return arm_combo_.empty(); }

  std::uint32_t combo_index(std::size_t arm) const { return arm_combo_[arm]; }
  const HyperCombo& combo(std::size_t arm) const { return tables_->hyper[arm_combo_[arm]]; }

  std::size_t sub_count(std::size_t arm) const {
    return sub_offsets_[arm + 1] - sub_offsets_[arm];
  }
  std::span<const std::uint32_t> sub_resource_indices(std::size_t arm) const;
  AllocationDecision sub_action(std::size_t arm, std::size_t k) const;
  std::size_t total_sub_actions() const { return sub_resources_.size(); }

  // OLS: the arm's decision. Otherwise its first sub-action.
  AllocationDecision decision(std::size_t arm) const { return sub_action(arm, 0); }
  SuperAction super_action(std::size_t arm) const;

  const Tables& tables() const { return *tables_; }
  std::shared_ptr<const Tables> shared_tables() const { return tables_; }

 private:
  Algorithm kind_;
  std::shared_ptr<const Tables> tables_;
  std::vector<std::uint32_t> arm_combo_;
  std::vector<std::uint32_t> sub_offsets_;
  std::vector<std::uint32_t> sub_resources_;
};

// Cartesian products in canonical order (model 1 outermost).
std::vector<HyperCombo> enumerate_hyperparams(const Grids& grids);
std::vector<ResourceCombo> enumerate_resources(const Grids& grids);

// Keeps combos meeting total compute, total rate and every per-model budget.
std::vector<ResourceCombo> filter_resources(std::span<const ResourceCombo> combos,
                                            const Environment& env,
                                            PrelearnCounters* counters = nullptr);

// One arm per deadline-feasible (hyper, resource) pairing. Arms are ordered
// lexicographically by grid index with key (l, m, psi, lambda) per model.
DecisionSpace build_ols_space(std::vector<HyperCombo> hyper,
                              std::vector<ResourceCombo> feasible_res,
                              const Environment& env,
                              PrelearnCounters* counters = nullptr);

// One super action per hyper combo with at least one feasible pairing.
DecisionSpace build_super_actions(std::vector<HyperCombo> hyper,
                                  std::vector<ResourceCombo> feasible_res,
                                  const Environment& env,
                                  PrelearnCounters* counters = nullptr);

// Incremental candidacy maintenance: a super action enters the candidate set
// unless an existing candidate dominates it in every (l_i, m_i), and evicts
// every candidate it dominates. The survivors are the Pareto-maximal combos.
DecisionSpace reduce_super_actions(const DecisionSpace& sa_space,
                                   PrelearnCounters* counters = nullptr);

// Independent re-check of every constraint of the allocation problem.
bool validate_action(const AllocationDecision& a, const Environment& env);

// Names the constraint that eliminates the most candidates; used when a
// configuration yields no feasible action.
std::string explain_infeasibility(const Grids& grids, const Environment& env);

// Tolerant `<=` for constraint checks on decimal grid values.
bool within_limit(double value, double limit);

// All three spaces from one enumeration pass, with per-algorithm counters.
struct SpaceBundle {
  std::size_t hyper_count = 0;
  std::size_t resource_count = 0;
  std::size_t feasible_resource_count = 0;
  DecisionSpace ols;
  DecisionSpace sa;
  DecisionSpace rsa;
  PrelearnCounters ols_ops;
  PrelearnCounters sa_ops;
  PrelearnCounters rsa_ops;

  const DecisionSpace& space(Algorithm algorithm) const;
  const PrelearnCounters& ops(Algorithm algorithm) const;
};

// Throws ConfigError (with an infeasibility explanation) when no action is
// feasible.
SpaceBundle build_spaces(const Grids& grids, const Environment& env);

}  // namespace slicing
