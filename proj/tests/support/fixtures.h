#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "slicing/decision_space.h"
#include "slicing/env_model.h"

namespace fixtures {

// Regression rows of the four bundled DL models.
slicing::AccuracyCoeffs model_coeffs(int id);

slicing::ResourcePool base_pool();

// Two-model setup: bundled requests, 3-point grids on every variable.
slicing::Environment two_model_env();
slicing::Grids two_model_grids();

// Four-model setup with the enlarged pool.
slicing::Environment four_model_env();
slicing::Grids four_model_grids();

slicing::AllocationDecision uniform_decision(std::size_t models, double l, int m, double psi,
                                             double lambda);

// Small random instance: 1-3 models, grids of 1-3 points.
struct Instance {
  slicing::Environment env;
  slicing::Grids grids;
};
Instance random_instance(std::mt19937_64& rng);

}  // namespace fixtures
