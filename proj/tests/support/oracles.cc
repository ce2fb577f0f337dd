#include "oracles.h"

#include <algorithm>
#include <functional>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracles {

using slicing::AllocationDecision;
using slicing::Environment;
using slicing::ResourcePool;
using HP = boost::multiprecision::cpp_bin_float_50;

double accuracy(const std::array<double, 6>& g, double l, double m) {
  const HP L(l), M(m);
  HP v = HP(g[0]) * exp(HP(g[1]) * L) + HP(g[2]) * exp(HP(g[3]) * M) +
         HP(g[4]) * exp(HP(g[5]) * M);
  return static_cast<double>(v / 100);
}

namespace {

HP samples(double l, const ResourcePool& pool) {
  return HP(l) / 100 * HP(pool.dataset_size);
}

}  // namespace

double comm_delay(double l, double lambda, const ResourcePool& pool) {
  const HP seconds = samples(l, pool) / HP(pool.batch_size) / HP(lambda);
  return static_cast<double>(seconds / 60 + HP(pool.epsilon));
}

double proc_delay(double l, int m, double psi, const ResourcePool& pool) {
  const HP cycles = HP(m) * HP(pool.phi) * samples(l, pool);
  return static_cast<double>(cycles / (HP(psi) * HP(1e9)) / 60);
}

double cost(double psi, double lambda, const ResourcePool& pool) {
  return static_cast<double>(HP(pool.c_psi) * HP(psi) + HP(pool.c_lambda) * HP(lambda));
}

double performance(const AllocationDecision& a, const Environment& env) {
  HP num = 0, den = 0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const auto& x = a.per_model[i];
    HP q = accuracy(env.models()[i].coeffs.g, x.l, x.m);
    q = std::clamp(q, HP(0), HP(1));
    num += HP(env.models()[i].alpha) * q;
    den += HP(env.models()[i].alpha);
  }
  return static_cast<double>(num / den);
}

double optimal_eta(double arms, double horizon) {
  return static_cast<double>(sqrt(log(HP(arms)) / (HP(arms) * HP(horizon))));
}

double regret_bound(double arms, double eta, double horizon) {
  return static_cast<double>(log(HP(arms)) / HP(eta) + HP(eta) * HP(arms) * HP(horizon));
}

DecisionKey key(const AllocationDecision& a) {
  DecisionKey k;
  for (const auto& x : a.per_model) k.emplace_back(x.l, x.m, x.psi, x.lambda);
  return k;
}

namespace {

constexpr double kSlack = 1e-9;

bool fits(double v, double limit) { return v <= limit + kSlack * std::max(1.0, std::abs(limit)); }

bool feasible(const DecisionKey& k, const Environment& env) {
  const auto& pool = env.pool();
  double psi = 0, lambda = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto& [l, m, p, r] = k[i];
    const auto& spec = env.models()[i];
    const double latency = oracles::comm_delay(l, r, pool) + oracles::proc_delay(l, m, p, pool);
    if (!fits(latency, spec.d_max)) return false;
    if (!fits(oracles::cost(p, r, pool), spec.c_max)) return false;
    psi += p;
    lambda += r;
  }
  return fits(psi, pool.psi_max) && fits(lambda, pool.lambda_max);
}

}  // namespace

std::set<DecisionKey> feasible_actions(const slicing::Grids& grids, const Environment& env) {
  std::set<DecisionKey> out;
  DecisionKey current(grids.per_model.size());
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == grids.per_model.size()) {
      if (feasible(current, env)) out.insert(current);
      return;
    }
    const auto& g = grids.per_model[i];
    for (double l : g.l)
      for (int m : g.m)
        for (double p : g.psi)
          for (double r : g.lambda) {
            current[i] = {l, m, p, r};
            walk(i + 1);
          }
  };
  walk(0);
  return out;
}

std::set<HyperKey> pareto_hyper(const std::set<DecisionKey>& feasible) {
  std::set<HyperKey> combos;
  for (const auto& k : feasible) {
    HyperKey h;
    for (const auto& [l, m, p, r] : k) {
      h.push_back(l);
      h.push_back(m);
    }
    combos.insert(h);
  }
  std::set<HyperKey> out;
  for (const auto& a : combos) {
    bool dominated = false;
    for (const auto& b : combos) {
      if (a == b) continue;
      bool ge = true;
      for (std::size_t d = 0; d < a.size(); ++d) ge = ge && b[d] >= a[d];
      if (ge) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(a);
  }
  return out;
}

HyperKey hyper_key(const slicing::HyperCombo& c) {
  HyperKey h;
  for (const auto& x : c.per_model) {
    h.push_back(x.l);
    h.push_back(x.m);
  }
  return h;
}

double best_performance(const std::set<DecisionKey>& feasible, const Environment& env) {
  double best = -1.0;
  for (const auto& k : feasible) {
    AllocationDecision a;
    for (const auto& [l, m, p, r] : k) a.per_model.push_back({l, m, p, r});
    best = std::max(best, performance(a, env));
  }
  return best;
}

}  // namespace oracles
