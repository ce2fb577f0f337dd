#include "slicing/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "slicing/errors.h"

namespace slicing {

namespace {

// exp(-700) is still a positive double, so played arms never hit exact zero.
constexpr double kMinExponent = -700.0;

}  // namespace

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sbs_window_begin(std::size_t center, std::size_t subset_size, std::size_t arms) {
  if (subset_size < 1 || subset_size > arms) {
    throw ConfigError(fmt::format("SBS subset size J'={} must lie in [1, {}]", subset_size, arms));
  }
  if (center < 1 || center > arms) {
    throw ConfigError(fmt::format("SBS center {} must lie in [1, {}]", center, arms));
  }
  const auto half = static_cast<long long>(subset_size / 2);
  long long begin = static_cast<long long>(center) - 1 - half;
  begin = std::clamp(begin, 0LL, static_cast<long long>(arms - subset_size));
  return static_cast<std::size_t>(begin);
}

std::vector<double> init_weights(const InitScheme& scheme, std::size_t arms) {
  if (arms < 1) throw ConfigError("cannot initialize weights over zero arms");
  std::vector<double> w(arms, 0.0);
  switch (scheme.kind) {
    case InitScheme::Kind::kUniform:
      std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(arms));
      break;
    case InitScheme::Kind::kSbs: {
      const auto begin = sbs_window_begin(scheme.center, scheme.subset_size, arms);
      const double p = 1.0 / static_cast<double>(scheme.subset_size);
      std::fill_n(w.begin() + static_cast<std::ptrdiff_t>(begin), scheme.subset_size, p);
      break;
    }
    case InitScheme::Kind::kGbs: {
      if (!(scheme.sigma > 0.0)) throw ConfigError("GBS sigma must be positive");
      for (std::size_t j = 0; j < arms; ++j) {
        const double d = static_cast<double>(j + 1) - scheme.mu;
        w[j] = std::exp(-d * d / (2.0 * scheme.sigma * scheme.sigma));
      }
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      if (!(total > 0.0)) throw ConfigError("GBS weights underflow; mu is too far from the arms");
      for (auto& x : w) x /= total;
      break;
    }
  }
  return w;
}

std::size_t sample_arm(std::span<const double> weights, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    last_positive = j;
    cumulative += weights[j];
    if (u < cumulative) return j;
  }
  // Rounding left u above the accumulated mass.
  if (last_positive == weights.size()) throw std::logic_error("no arm carries weight");
  return last_positive;
}

std::size_t sample_sub_action(std::size_t count, Rng& rng) {
  const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count));
  return std::min(k, count - 1);
}

Exp3Learner::Exp3Learner(std::vector<double> initial_weights, double eta)
    : weights_(std::move(initial_weights)), eta_(eta) {
  if (weights_.empty()) throw ConfigError("learner needs at least one arm");
  if (!(eta_ > 0.0 && eta_ < 1.0)) {
    throw ConfigError(fmt::format("learning rate {} outside (0, 1)", eta_));
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9 ||
      std::any_of(weights_.begin(), weights_.end(), [](double x) { return !(x >= 0.0); })) {
    throw ConfigError("initial weights must be a probability vector");
  }
}

void Exp3Learner::update(std::size_t j, double loss) {
  const double wj = weights_.at(j);
  if (!(wj > 0.0)) throw std::logic_error("updated arm has zero probability");
  const double factor = std::exp(std::max(kMinExponent, -eta_ * loss / wj));
  if (factor == 1.0) return;
  weights_[j] = std::max(wj * factor, std::numeric_limits<double>::denorm_min());
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (auto& x : weights_) x /= total;
}

double optimal_eta(std::size_t arms, std::size_t horizon) {
  if (arms < 2) throw ConfigError("optimal learning rate needs at least two arms");
  if (horizon < 1) throw ConfigError("optimal learning rate needs a positive horizon");
  const double j = static_cast<double>(arms);
  return std::sqrt(std::log(j) / (j * static_cast<double>(horizon)));
}

double regret_bound(std::size_t arms, double eta, double horizon) {
  const double j = static_cast<double>(arms);
  return std::log(j) / eta + eta * j * horizon;
}

}  // namespace slicing
