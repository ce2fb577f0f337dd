#include "fixtures.h"

#include <algorithm>
#include <set>

namespace fixtures {

using namespace slicing;

AccuracyCoeffs model_coeffs(int id) {
  switch (id) {
    case 1: return {{-60, -0.03109, 96.98, 0.0006553, -120, -0.8355}};
    case 2: return {{-48, -0.03, 98.5, 0.001, -97, -0.5}};
    case 3: return {{-40, -0.04, 97, 0.002, -110, -0.6}};
    default: return {{-38, -0.04, 95, 0.0015, -100, -0.64}};
  }
}

ResourcePool base_pool() {
  ResourcePool p;
  p.psi_max = 3.7;
  p.lambda_max = 5;
  p.phi = 350000;
  p.c_psi = 0.2;
  p.c_lambda = 0.02;
  return p;
}

namespace {

ModelSpec spec(int id, double c_max, double d_max, double l_min, int m_min) {
  ModelSpec s;
  s.id = id;
  s.coeffs = model_coeffs(id);
  s.alpha = 1.0;
  s.c_max = c_max;
  s.d_max = d_max;
  s.l_min = l_min;
  s.l_max = 100;
  s.m_min = m_min;
  s.m_max = 10;
  return s;
}

}  // namespace

Environment two_model_env() {
  return Environment({spec(1, 0.46, 3.70, 25, 2), spec(2, 0.36, 4.50, 25, 2)}, base_pool());
}

Grids two_model_grids() {
  ModelGrid g{{25, 50, 100}, {2, 5, 10}, {1.5, 1.8, 2.2}, {1, 2, 3}};
  return Grids{{g, g}};
}

Environment four_model_env() {
  auto pool = base_pool();
  pool.psi_max = 7;
  pool.lambda_max = 7;
  return Environment({spec(1, 0.46, 3.07, 20, 3), spec(2, 0.46, 3.07, 20, 3),
                      spec(3, 0.38, 4.4, 20, 3), spec(4, 0.36, 5.3, 20, 3)},
                     pool);
}

Grids four_model_grids() {
  ModelGrid g{{20, 55, 80, 100}, {3, 5, 8, 10}, {1.5, 1.8, 2.2}, {1, 2, 3}};
  return Grids{{g, g, g, g}};
}

AllocationDecision uniform_decision(std::size_t models, double l, int m, double psi,
                                    double lambda) {
  return AllocationDecision{std::vector<ModelAllocation>(models, {l, m, psi, lambda})};
}

namespace {

template <class T>
std::vector<T> pick_sorted(std::mt19937_64& rng, const std::vector<T>& pool, std::size_t n) {
  std::vector<T> out;
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), n, rng);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> models_dist(1, 3), size_dist(1, 3), id_dist(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(models_dist(rng));

  const std::vector<double> l_values{20, 25, 40, 50, 55, 75, 80, 100};
  const std::vector<int> m_values{1, 2, 3, 5, 8, 10};
  const std::vector<double> psi_values{1.0, 1.5, 1.8, 2.2, 3.0};
  const std::vector<double> lambda_values{0.5, 1, 2, 3};

  auto pool = base_pool();
  pool.psi_max = 1.5 * static_cast<double>(n) + unit(rng) * 2.0 * static_cast<double>(n);
  pool.lambda_max = 1.0 * static_cast<double>(n) + unit(rng) * 3.0 * static_cast<double>(n);

  std::vector<ModelSpec> models;
  Grids grids;
  for (std::size_t i = 0; i < n; ++i) {
    ModelSpec s;
    s.id = static_cast<int>(i) + 1;
    s.coeffs = model_coeffs(id_dist(rng));
    s.alpha = 0.5 + unit(rng);
    s.c_max = 0.35 + 0.5 * unit(rng);
    s.d_max = 1.0 + 9.0 * unit(rng);
    s.l_min = 20;
    s.l_max = 100;
    s.m_min = 1;
    s.m_max = 10;
    models.push_back(s);
    grids.per_model.push_back(
        {pick_sorted(rng, l_values, static_cast<std::size_t>(size_dist(rng))),
         pick_sorted(rng, m_values, static_cast<std::size_t>(size_dist(rng))),
         pick_sorted(rng, psi_values, static_cast<std::size_t>(size_dist(rng))),
         pick_sorted(rng, lambda_values, static_cast<std::size_t>(size_dist(rng)))});
  }
  // grid values must fit the pool
  for (const auto& g : grids.per_model) {
    pool.psi_max = std::max(pool.psi_max, g.psi.back());
    pool.lambda_max = std::max(pool.lambda_max, g.lambda.back());
  }
  return {Environment(std::move(models), pool), std::move(grids)};
}

}  // namespace fixtures
