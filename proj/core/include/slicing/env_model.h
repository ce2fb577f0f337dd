#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace slicing {

// Coefficients (g1..g6) of the exponential accuracy regression
//   q(l, m) = (g1 e^{g2 l} + g3 e^{g4 m} + g5 e^{g6 m}) / 100.
struct AccuracyCoeffs {
  std::array<double, 6> g{};
};

// One AI service: accuracy model plus its deployment request tuple.
struct ModelSpec {
  int id = 1;
  AccuracyCoeffs coeffs;
  double alpha = 1.0;   // priority weight
  double c_max = 0.0;   // budget, dollars
  double d_max = 0.0;   // deadline, minutes
  double l_min = 0.0;   // data size range, percent of dataset_size
  double l_max = 100.0;
  int m_min = 1;        // epoch range
  int m_max = 1;
};

// Shared capacities and unit costs of the edge platform.
struct ResourcePool {
  double psi_max = 0.0;          // GHz
  double lambda_max = 0.0;       // batches/sec
  double phi = 0.0;              // CPU cycles per sample
  double c_psi = 0.0;            // dollars per GHz
  double c_lambda = 0.0;         // dollars per batch/sec
  double epsilon = 0.0;          // channel access delay, minutes
  double dataset_size = 245921;  // samples at l = 100%
  double batch_size = 10000;     // samples per batch
};

// Per-model slice of an allocation decision.
struct ModelAllocation {
  double l = 0.0;       // percent
  int m = 0;            // epochs
  double psi = 0.0;     // GHz
  double lambda = 0.0;  // batches/sec

  friend bool operator==(const ModelAllocation&, const ModelAllocation&) = default;
};

// One bandit arm of the flat decision space: a full joint allocation.
struct AllocationDecision {
  std::vector<ModelAllocation> per_model;

  friend bool operator==(const AllocationDecision&, const AllocationDecision&) = default;
};

class Environment {
 public:
  // Piecewise-constant override: an entry keyed at slot s applies to every
  // slot >= s until the next entry. Slots are 1-based.
  using CoeffSchedule = std::map<std::size_t, std::vector<AccuracyCoeffs>>;

  Environment(std::vector<ModelSpec> models, ResourcePool pool,
              CoeffSchedule schedule = {});

  const std::vector<ModelSpec>& models() const { return models_; }
  const ResourcePool& pool() const { return pool_; }
  const CoeffSchedule& schedule() const { return schedule_; }
  std::size_t size() const { return models_.size(); }
  bool has_schedule() const { return !schedule_.empty(); }

  // Coefficients of model `i` (0-based) in effect at `slot`.
  const AccuracyCoeffs& coeffs(std::size_t i, std::size_t slot) const;

 private:
  std::vector<ModelSpec> models_;
  ResourcePool pool_;
  CoeffSchedule schedule_;
};

// Unclamped regression value; throws DomainError on overflow.
double accuracy(const AccuracyCoeffs& coeffs, double l, double m);

// Samples corresponding to a data-size percentage.
double samples_for_percent(double l, const ResourcePool& pool);

// Minutes to transfer `samples` at `lambda` batches/sec, plus epsilon.
double comm_delay(double samples, double lambda, const ResourcePool& pool);

// Minutes to train `epochs` passes over `samples` at `psi` GHz.
double proc_delay(double samples, int epochs, double psi, const ResourcePool& pool);

double learning_latency(const ModelAllocation& a, const ResourcePool& pool);

// Dollars for one model's resources.
double cost(double psi, double lambda, const ResourcePool& pool);

// Per-model accuracies clamped into [0, 1].
std::vector<double> model_accuracies(const AllocationDecision& decision,
                                     const Environment& env, std::size_t slot);

// Priority-weighted, normalized mean of clamped accuracies.
double system_performance(const AllocationDecision& decision, const Environment& env,
                          std::size_t slot);
double system_performance(std::span<const double> clamped_accuracies,
                          const Environment& env);

double loss(double performance);

}  // namespace slicing
