#include "slicing/baselines.h"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "slicing/errors.h"

namespace slicing {

namespace {

bool same_combo(const HyperCombo& a, const HyperCombo& b) {
  if (a.per_model.size() != b.per_model.size()) return false;
  for (std::size_t i = 0; i < a.per_model.size(); ++i) {
    if (a.per_model[i].l != b.per_model[i].l || a.per_model[i].m != b.per_model[i].m) {
      return false;
    }
  }
  return true;
}

OracleResult collect_maximizers(const DecisionSpace& space, const std::vector<double>& value) {
  OracleResult out;
  out.optimal_performance = *std::max_element(value.begin(), value.end());
  for (std::size_t j = 0; j < space.size(); ++j) {
    if (out.optimal_performance - value[j] > kTieTolerance) continue;
    if (out.optimal_arms.empty()) out.optimal_super_action = space.combo(j);
    out.optimal_arms.push_back(j);
    for (std::size_t k = 0; k < space.sub_count(j); ++k) {
      out.optimal_decisions.push_back(space.sub_action(j, k));
    }
  }
  return out;
}

}  // namespace

std::vector<double> arm_performances(const DecisionSpace& space, const Environment& env,
                                     std::size_t slot) {
  std::vector<double> value(space.size());
  for (std::size_t j = 0; j < space.size(); ++j) {
    value[j] = system_performance(space.decision(j), env, slot);
  }
  return value;
}

OracleResult oa_oracle(const DecisionSpace& space, const Environment& env, std::size_t slot) {
  if (space.empty()) throw ConfigError("oracle over an empty decision space");
  // Every sub-action is evaluated; an arm's value is its best sub-action.
  std::vector<double> value(space.size());
  for (std::size_t j = 0; j < space.size(); ++j) {
    double best = -1.0;
    for (std::size_t k = 0; k < space.sub_count(j); ++k) {
      best = std::max(best, system_performance(space.sub_action(j, k), env, slot));
    }
    value[j] = best;
  }
  return collect_maximizers(space, value);
}

OracleResult hindsight_oracle(const DecisionSpace& space, const Environment& env,
                              std::size_t horizon) {
  if (!env.has_schedule() || horizon == 0) return oa_oracle(space, env, 1);
  // Coefficients are piecewise constant, so sum segment-by-segment.
  std::vector<std::size_t> starts{1};
  for (const auto& [slot, coeffs] : env.schedule()) {
    if (slot > 1 && slot <= horizon) starts.push_back(slot);
  }
  std::vector<double> total(space.size(), 0.0);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : horizon + 1;
    const auto len = static_cast<double>(end - starts[s]);
    const auto perf = arm_performances(space, env, starts[s]);
    for (std::size_t j = 0; j < space.size(); ++j) total[j] += len * perf[j];
  }
  auto out = collect_maximizers(space, total);
  out.optimal_performance /= static_cast<double>(horizon);
  return out;
}

std::vector<std::size_t> arms_with_combo(const DecisionSpace& space, const HyperCombo& combo) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < space.size(); ++j) {
    if (same_combo(space.combo(j), combo)) out.push_back(j);
  }
  return out;
}

std::vector<double> fa_policy(const AllocationDecision& fixed, const Environment& env,
                              std::size_t horizon) {
  if (!validate_action(fixed, env)) {
    throw ConfigError("fixed allocation violates the allocation constraints");
  }
  std::vector<double> out(horizon);
  if (!env.has_schedule()) {
    std::fill(out.begin(), out.end(), system_performance(fixed, env, 1));
    return out;
  }
  for (std::size_t t = 0; t < horizon; ++t) out[t] = system_performance(fixed, env, t + 1);
  return out;
}

}  // namespace slicing
