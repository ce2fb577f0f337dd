#include "slicing/analytics.h"

#include <stdexcept>

#include "slicing/errors.h"

namespace slicing {

std::size_t default_snapshot_cadence(std::size_t arms) { return arms <= 1000 ? 1 : 10; }

std::vector<double> optimal_series(const OracleResult& oracle, const Environment& env,
                                   std::size_t horizon) {
  if (oracle.optimal_decisions.empty()) throw std::invalid_argument("oracle has no maximizer");
  const auto& best = oracle.optimal_decisions.front();
  std::vector<double> out(horizon);
  if (!env.has_schedule()) {
    std::fill(out.begin(), out.end(), system_performance(best, env, 1));
    return out;
  }
  for (std::size_t t = 0; t < horizon; ++t) out[t] = system_performance(best, env, t + 1);
  return out;
}

std::vector<double> cumulative_regret(const RunTrace& trace, std::span<const double> optimal) {
  if (optimal.size() < trace.horizon()) {
    throw std::invalid_argument("optimal series shorter than the trace");
  }
  std::vector<double> out(trace.horizon());
  double total = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    total += optimal[t] - trace.slots[t].performance;
    out[t] = total;
  }
  return out;
}

std::vector<double> average_regret(const RunTrace& trace, std::span<const double> optimal) {
  auto out = cumulative_regret(trace, optimal);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] /= static_cast<double>(t + 1);
  return out;
}

std::vector<double> average_reward(const RunTrace& trace) {
  std::vector<double> out(trace.horizon());
  double total = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    total += trace.slots[t].performance;
    out[t] = total / static_cast<double>(t + 1);
  }
  return out;
}

ProbabilitySeries optimal_probability(const RunTrace& trace, const OracleResult& oracle) {
  if (trace.snapshots.empty() && trace.horizon() > 0) {
    throw UnavailableError("probability snapshots were not recorded for this run");
  }
  auto mass = [&](const std::vector<double>& w) {
    double p = 0.0;
    for (auto j : oracle.optimal_arms) p += w.at(j);
    return p;
  };
  ProbabilitySeries out;
  out.slots.push_back(0);
  out.values.push_back(mass(trace.initial_weights));
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    out.slots.push_back(trace.snapshot_slots[k]);
    out.values.push_back(mass(trace.snapshots[k]));
  }
  return out;
}

OpCounters count_ops(const PrelearnCounters& prelearn, const DecisionSpace& space) {
  return {prelearn.total(), space.size()};
}

std::vector<std::uint64_t> cumulative_complexity(const OpCounters& counters,
                                                 std::size_t horizon) {
  std::vector<std::uint64_t> out(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) {
    out[t] = counters.prelearn_ops + t * counters.learn_ops_per_slot;
  }
  return out;
}

std::vector<double> mean_series(std::span<const std::vector<double>> series) {
  if (series.empty()) return {};
  std::vector<double> out(series.front().size(), 0.0);
  for (const auto& s : series) {
    if (s.size() != out.size()) throw std::invalid_argument("series lengths differ");
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += s[t];
  }
  for (auto& x : out) x /= static_cast<double>(series.size());
  return out;
}

}  // namespace slicing
