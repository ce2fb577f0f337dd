#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "slicing/errors.h"
#include "slicing/learner.h"

using namespace slicing;

namespace {

double sum(std::span<const double> w) { return std::accumulate(w.begin(), w.end(), 0.0); }

TEST(InitWeights, Uniform) {
  const auto w = init_weights(InitScheme::uniform(), 4);
  EXPECT_EQ(w, (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(InitWeights, StrictSubsetCentered) {
  const auto w = init_weights(InitScheme::sbs(40, 5), 100);
  for (std::size_t j = 1; j <= 100; ++j) {
    if (j >= 38 && j <= 42) EXPECT_DOUBLE_EQ(w[j - 1], 0.2) << j;
    else EXPECT_EQ(w[j - 1], 0.0) << j;
  }
}

TEST(InitWeights, StrictSubsetShiftedAtEdges) {
  auto w = init_weights(InitScheme::sbs(1, 5), 10);
  EXPECT_EQ(std::count(w.begin(), w.begin() + 5, 0.2), 5);
  EXPECT_EQ(std::count(w.begin() + 5, w.end(), 0.0), 5);
  w = init_weights(InitScheme::sbs(10, 4), 10);
  EXPECT_EQ(std::count(w.begin() + 6, w.end(), 0.25), 4);
  EXPECT_EQ(std::count(w.begin(), w.begin() + 6, 0.0), 6);
}

TEST(InitWeights, StrictSubsetRejectsBadSizes) {
  EXPECT_THROW(init_weights(InitScheme::sbs(3, 0), 10), ConfigError);
  EXPECT_THROW(init_weights(InitScheme::sbs(3, 11), 10), ConfigError);
  EXPECT_THROW(init_weights(InitScheme::sbs(11, 2), 10), ConfigError);
  EXPECT_NO_THROW(init_weights(InitScheme::sbs(5, 10), 10));
}

TEST(InitWeights, Gaussian) {
  const auto w = init_weights(InitScheme::gbs(2, 1), 3);
  EXPECT_NEAR(w[0], 0.27406, 1e-5);
  EXPECT_NEAR(w[1], 0.45187, 1e-5);
  EXPECT_NEAR(w[2], 0.27406, 1e-5);
  EXPECT_NEAR(sum(w), 1.0, 1e-15);
}

TEST(InitWeights, GaussianRejectsNonPositiveSigma) {
  EXPECT_THROW(init_weights(InitScheme::gbs(2, 0), 3), ConfigError);
  EXPECT_THROW(init_weights(InitScheme::gbs(2, -1), 3), ConfigError);
}

TEST(SampleArm, Degenerate) {
  Rng rng(7);
  const std::vector<double> w{0, 1, 0};
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(sample_arm(w, rng), 1u);
}

TEST(SampleArm, StaysInsideSubset) {
  Rng rng(11);
  const auto w = init_weights(InitScheme::sbs(40, 5), 100);
  for (int k = 0; k < 10000; ++k) {
    const auto j = sample_arm(w, rng);
    EXPECT_GE(j, 37u);
    EXPECT_LE(j, 41u);
  }
}

TEST(SampleArm, UniformFrequencies) {
  Rng rng(2024);
  const auto w = init_weights(InitScheme::uniform(), 4);
  std::vector<int> counts(4);
  constexpr int kDraws = 100000;
  for (int k = 0; k < kDraws; ++k) ++counts[sample_arm(w, rng)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, 0.25, 0.01);
}

TEST(SampleArm, DeterministicPerSeed) {
  const auto w = init_weights(InitScheme::gbs(3, 2), 8);
  Rng a(5), b(5);
  for (int k = 0; k < 500; ++k) EXPECT_EQ(sample_arm(w, a), sample_arm(w, b));
}

TEST(SampleSubAction, Singleton) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(sample_sub_action(1, rng), 0u);
}

TEST(SampleSubAction, UniformOverThree) {
  Rng rng(99);
  std::vector<int> counts(3);
  constexpr int kDraws = 30000;
  for (int k = 0; k < kDraws; ++k) ++counts[sample_sub_action(3, rng)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, 1.0 / 3.0, 0.02);
}

TEST(SampleSubAction, VariesAcrossSlots) {
  Rng rng(3);
  std::set<std::size_t> seen;
  for (int k = 0; k < 20; ++k) seen.insert(sample_sub_action(3, rng));
  EXPECT_GT(seen.size(), 1u);
}

TEST(Exp3Update, HalfHalfFullLoss) {
  Exp3Learner learner({0.5, 0.5}, 0.5);
  learner.update(0, 1.0);
  EXPECT_NEAR(learner.weight(0), 0.26894, 1e-5);
  EXPECT_NEAR(learner.weight(1), 0.73106, 1e-5);
}

TEST(Exp3Update, QuarterHalfLoss) {
  Exp3Learner learner({0.25, 0.75}, 0.1);
  learner.update(0, 0.5);
  EXPECT_NEAR(learner.weight(0), 0.21440, 1e-5);
  EXPECT_NEAR(learner.weight(1), 0.78560, 1e-5);
}

TEST(Exp3Update, ZeroLossLeavesStateBitIdentical) {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  Exp3Learner learner(w, 0.3);
  learner.update(2, 0.0);
  EXPECT_TRUE(std::equal(w.begin(), w.end(), learner.weights().begin()));
}

TEST(Exp3Update, ZeroProbabilityArmIsLogicError) {
  Exp3Learner learner({0.0, 1.0}, 0.3);
  EXPECT_THROW(learner.update(0, 0.5), std::logic_error);
}

TEST(Exp3Update, TinyWeightStaysPositive) {
  Exp3Learner learner({1e-300, 1.0 - 1e-300}, 0.9);
  learner.update(0, 1.0);
  EXPECT_GT(learner.weight(0), 0.0);
  EXPECT_NEAR(sum(learner.weights()), 1.0, 1e-12);
}

TEST(Exp3Learner, RejectsBadRates) {
  EXPECT_THROW(Exp3Learner({0.5, 0.5}, 0.0), ConfigError);
  EXPECT_THROW(Exp3Learner({0.5, 0.5}, 1.0), ConfigError);
  EXPECT_THROW(Exp3Learner({0.5, 0.5}, 1.5), ConfigError);
  EXPECT_THROW(Exp3Learner({0.5, 0.6}, 0.1), ConfigError);
}

TEST(Exp3Learner, PropertiesOverRandomUpdates) {
  Rng rng(42);
  auto w0 = init_weights(InitScheme::sbs(10, 7), 25);
  Exp3Learner learner(w0, 0.2);
  for (int t = 0; t < 5000; ++t) {
    const auto before = std::vector<double>(learner.weights().begin(), learner.weights().end());
    const auto j = learner.sample(rng);
    const double y = uniform01(rng);
    learner.update(j, y);
    const auto w = learner.weights();
    EXPECT_NEAR(sum(w), 1.0, 1e-9);
    // zeros stay zero, ratios between unplayed arms are preserved
    std::size_t a = w.size(), b = w.size();
    for (std::size_t k = 0; k < w.size(); ++k) {
      ASSERT_GE(w[k], 0.0);
      if (w0[k] == 0.0) {
        ASSERT_EQ(w[k], 0.0);
      } else if (k != j) {
        if (y > 0) ASSERT_GT(w[k], before[k]);
        if (a == w.size()) a = k;
        else if (b == w.size()) b = k;
      }
    }
    if (y > 0) ASSERT_LT(w[j], before[j]);
    if (b < w.size()) ASSERT_NEAR(w[a] / w[b], before[a] / before[b], 1e-12 * before[a] / before[b]);
  }
}

TEST(OptimalEta, Examples) {
  EXPECT_NEAR(optimal_eta(720, 20), 0.021375, 1e-5);
  EXPECT_NEAR(optimal_eta(2, 1), 0.58870, 1e-5);
  EXPECT_NEAR(optimal_eta(720, 20), oracles::optimal_eta(720, 20), 1e-15);
}

TEST(OptimalEta, DecreasingInArms) {
  for (std::size_t j = 3; j < 2000; ++j) EXPECT_GT(optimal_eta(j, 100), optimal_eta(j + 1, 100));
}

TEST(OptimalEta, DegenerateInputs) {
  EXPECT_THROW(optimal_eta(1, 10), ConfigError);
  EXPECT_THROW(optimal_eta(5, 0), ConfigError);
}

TEST(RegretBound, AtOptimalRate) {
  const double eta = optimal_eta(720, 20);
  EXPECT_NEAR(regret_bound(720, eta, 20), 615.62, 0.1);
  EXPECT_NEAR(std::log(720.0) / eta, eta * 720 * 20, 1e-9);
}

TEST(RegretBound, SingleArm) { EXPECT_DOUBLE_EQ(regret_bound(1, 0.3, 50), 0.3 * 50); }

TEST(RegretBound, MinimizedAtOptimalRate) {
  const double best = regret_bound(90, optimal_eta(90, 1000), 1000);
  for (double eta = 1e-4; eta < 1.0; eta *= 1.3) EXPECT_LE(best, regret_bound(90, eta, 1000) + 1e-9);
}

TEST(RegretBound, SmallerSubsetTightens) {
  const std::size_t T = 5000;
  for (std::size_t jp = 2; jp < 90; ++jp) {
    EXPECT_LT(regret_bound(jp, optimal_eta(jp, T), T), regret_bound(90, optimal_eta(90, T), T));
    EXPECT_GT(optimal_eta(jp, T), optimal_eta(90, T));
  }
}

}  // namespace
