#include "slicing/env_model.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "slicing/errors.h"

namespace slicing {

namespace {

constexpr double kSecondsPerMinute = 60.0;
constexpr double kHz = 1e9;  // psi is expressed in GHz

}  // namespace

Environment::Environment(std::vector<ModelSpec> models, ResourcePool pool,
                         CoeffSchedule schedule)
    : models_(std::move(models)), pool_(pool), schedule_(std::move(schedule)) {
  if (models_.empty()) throw ConfigError("environment needs at least one model");
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (models_[i].id != static_cast<int>(i + 1)) {
      throw ConfigError("model ids must be 1..I in order; model at position " +
                        std::to_string(i + 1) + " has id " +
                        std::to_string(models_[i].id));
    }
  }
  for (const auto& [slot, coeffs] : schedule_) {
    if (slot == 0) throw ConfigError("coeff_schedule slots are 1-based");
    if (coeffs.size() != models_.size()) {
      throw ConfigError("coeff_schedule entry at slot " + std::to_string(slot) +
                        " must list one coefficient row per model");
    }
  }
}

const AccuracyCoeffs& Environment::coeffs(std::size_t i, std::size_t slot) const {
  if (!schedule_.empty()) {
    auto it = schedule_.upper_bound(slot);
    if (it != schedule_.begin()) return std::prev(it)->second[i];
  }
  return models_[i].coeffs;
}

double accuracy(const AccuracyCoeffs& c, double l, double m) {
  const auto& g = c.g;
  const double q =
      (g[0] * std::exp(g[1] * l) + g[2] * std::exp(g[3] * m) + g[4] * std::exp(g[5] * m)) /
      100.0;
  if (!std::isfinite(q)) throw DomainError("accuracy regression overflowed");
  return q;
}

double samples_for_percent(double l, const ResourcePool& pool) {
  return l / 100.0 * pool.dataset_size;
}

double comm_delay(double samples, double lambda, const ResourcePool& pool) {
  const double batches = samples / pool.batch_size;
  return batches / lambda / kSecondsPerMinute + pool.epsilon;
}

double proc_delay(double samples, int epochs, double psi, const ResourcePool& pool) {
  return static_cast<double>(epochs) * pool.phi * samples / (psi * kHz) / kSecondsPerMinute;
}

double learning_latency(const ModelAllocation& a, const ResourcePool& pool) {
  const double samples = samples_for_percent(a.l, pool);
  return comm_delay(samples, a.lambda, pool) + proc_delay(samples, a.m, a.psi, pool);
}

double cost(double psi, double lambda, const ResourcePool& pool) {
  return pool.c_psi * psi + pool.c_lambda * lambda;
}

std::vector<double> model_accuracies(const AllocationDecision& decision,
                                     const Environment& env, std::size_t slot) {
  std::vector<double> q(decision.per_model.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& a = decision.per_model[i];
    q[i] = std::clamp(accuracy(env.coeffs(i, slot), a.l, a.m), 0.0, 1.0);
  }
  return q;
}

double system_performance(std::span<const double> q, const Environment& env) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double alpha = env.models()[i].alpha;
    weighted += alpha * q[i];
    total += alpha;
  }
  return weighted / total;
}

double system_performance(const AllocationDecision& decision, const Environment& env,
                          std::size_t slot) {
  const auto q = model_accuracies(decision, env, slot);
  return system_performance(q, env);
}

double loss(double performance) { return 1.0 - performance; }

}  // namespace slicing
