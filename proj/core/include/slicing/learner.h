#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace slicing {

// All run randomness flows through one mt19937_64 per seed.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng);

// Initial probability vector. Index arguments (center, mu) are 1-based to
// match externally reported arm indices.
struct InitScheme {
  enum class Kind { kUniform, kSbs, kGbs };

  Kind kind = Kind::kUniform;
  std::size_t center = 1;       // SBS window center
  std::size_t subset_size = 1;  // SBS window size J'
  double mu = 1.0;              // GBS mean
  double sigma = 1.0;           // GBS standard deviation

  static InitScheme uniform() { return {}; }
  static InitScheme sbs(std::size_t center, std::size_t subset_size) {
    return {Kind::kSbs, center, subset_size, 1.0, 1.0};
  }
  static InitScheme gbs(double mu, double sigma) { return {Kind::kGbs, 1, 1, mu, sigma}; }
};

// First (0-based) index of the SBS window: centered on `center`, shifted to
// stay inside [1, J] while keeping its size.
std::size_t sbs_window_begin(std::size_t center, std::size_t subset_size, std::size_t arms);

std::vector<double> init_weights(const InitScheme& scheme, std::size_t arms);

// Inverse-CDF draw; never returns an index whose weight is zero.
std::size_t sample_arm(std::span<const double> weights, Rng& rng);

// Uniform draw over `count` sub-actions.
std::size_t sample_sub_action(std::size_t count, Rng& rng);

// Exponential-weights learner with importance-weighted loss. Only the played
// arm's weight is rescaled by exp(-eta * loss / w_j); the vector is then
// renormalized.
class Exp3Learner {
 public:
  Exp3Learner(std::vector<double> initial_weights, double eta);

  std::size_t arms() const { return weights_.size(); }
  double eta() const { return eta_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t j) const { return weights_[j]; }

  std::size_t sample(Rng& rng) const { return sample_arm(weights_, rng); }

  // `loss` in [0, 1]; arm `j` must carry positive weight.
  void update(std::size_t j, double loss);

 private:
  std::vector<double> weights_;
  double eta_;
};

// Learning rate minimizing the regret bound: sqrt(ln J / (J T)).
double optimal_eta(std::size_t arms, std::size_t horizon);

// ln(J) / eta + eta * J * T.
double regret_bound(std::size_t arms, double eta, double horizon);

}  // namespace slicing
