#pragma once

#include <array>
#include <set>
#include <tuple>
#include <vector>

#include "slicing/decision_space.h"
#include "slicing/env_model.h"

// Reference implementations used only to check the library.
namespace oracles {

// Straight-line re-evaluation at 50 significant digits.
double accuracy(const std::array<double, 6>& g, double l, double m);
double comm_delay(double l, double lambda, const slicing::ResourcePool& pool);
double proc_delay(double l, int m, double psi, const slicing::ResourcePool& pool);
double cost(double psi, double lambda, const slicing::ResourcePool& pool);
double performance(const slicing::AllocationDecision& a, const slicing::Environment& env);
double optimal_eta(double arms, double horizon);
double regret_bound(double arms, double eta, double horizon);

// Per-model (l, m, psi, lambda) tuples; ordered so sets compare exactly.
using DecisionKey = std::vector<std::tuple<double, int, double, double>>;
DecisionKey key(const slicing::AllocationDecision& a);

// Every allocation in the Cartesian product of the grids that passes a
// from-scratch check of all constraints.
std::set<DecisionKey> feasible_actions(const slicing::Grids& grids,
                                       const slicing::Environment& env);

// (l_1, m_1, ..., l_I, m_I) of the Pareto-maximal feasible hyper combos.
using HyperKey = std::vector<double>;
std::set<HyperKey> pareto_hyper(const std::set<DecisionKey>& feasible);
HyperKey hyper_key(const slicing::HyperCombo& c);

// Best performance over a set of feasible allocations.
double best_performance(const std::set<DecisionKey>& feasible, const slicing::Environment& env);

}  // namespace oracles
