#include "slicing/decision_space.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "slicing/errors.h"

namespace slicing {

namespace {

constexpr double kConstraintTolerance = 1e-9;

// Feasible (hyper, resource) pairings grouped by hyper combo (CSR layout).
struct Pairings {
  std::vector<std::uint32_t> offsets;  // size |hyper| + 1
  std::vector<std::uint32_t> resources;
};

// Per-model deadline feasibility, precomputed over that model's grid values.
class DeadlineTable {
 public:
  DeadlineTable(const std::vector<HyperCombo>& hyper,
                const std::vector<ResourceCombo>& res, const Environment& env) {
    const std::size_t n = env.size();
    models_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& t = models_[i];
      for (const auto& h : hyper) {
        put(t.l, h.per_model[i].l_idx, h.per_model[i].l);
        put(t.m, h.per_model[i].m_idx, static_cast<double>(h.per_model[i].m));
      }
      for (const auto& r : res) {
        put(t.psi, r.per_model[i].psi_idx, r.per_model[i].psi);
        put(t.lambda, r.per_model[i].lambda_idx, r.per_model[i].lambda);
      }
      t.ok.resize(t.l.size() * t.m.size() * t.psi.size() * t.lambda.size());
      for (std::size_t a = 0; a < t.l.size(); ++a) {
        for (std::size_t b = 0; b < t.m.size(); ++b) {
          for (std::size_t c = 0; c < t.psi.size(); ++c) {
            for (std::size_t d = 0; d < t.lambda.size(); ++d) {
              const ModelAllocation x{t.l[a], static_cast<int>(t.m[b]), t.psi[c], t.lambda[d]};
              t.ok[((a * t.m.size() + b) * t.psi.size() + c) * t.lambda.size() + d] =
                  within_limit(learning_latency(x, env.pool()), env.models()[i].d_max);
            }
          }
        }
      }
    }
  }

  bool feasible(const HyperCombo& h, const ResourceCombo& r) const {
    for (std::size_t i = 0; i < models_.size(); ++i) {
      const auto& t = models_[i];
      const auto& x = h.per_model[i];
      const auto& y = r.per_model[i];
      const auto k =
          ((x.l_idx * t.m.size() + x.m_idx) * t.psi.size() + y.psi_idx) * t.lambda.size() +
          y.lambda_idx;
      if (!t.ok[k]) return false;
    }
    return true;
  }

 private:
  struct ModelTable {
    std::vector<double> l, m, psi, lambda;  // grid values by index
    std::vector<char> ok;
  };

  static void put(std::vector<double>& values, std::size_t idx, double v) {
    if (values.size() <= idx) values.resize(idx + 1, 0.0);
    values[idx] = v;
  }

  std::vector<ModelTable> models_;
};

Pairings pair_feasible(const std::vector<HyperCombo>& hyper,
                       const std::vector<ResourceCombo>& res, const Environment& env,
                       PrelearnCounters* counters) {
  const auto checks = static_cast<std::uint64_t>(hyper.size()) * res.size();
  if (checks > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError(fmt::format(
        "decision space too large: {} hyper-parameter x {} resource combinations",
        hyper.size(), res.size()));
  }
  Pairings p;
  p.offsets.reserve(hyper.size() + 1);
  p.offsets.push_back(0);
  if (!res.empty()) {
    const DeadlineTable table(hyper, res, env);
    for (const auto& h : hyper) {
      for (std::uint32_t s = 0; s < res.size(); ++s) {
        if (table.feasible(h, res[s])) p.resources.push_back(s);
      }
      p.offsets.push_back(static_cast<std::uint32_t>(p.resources.size()));
    }
  } else {
    p.offsets.resize(hyper.size() + 1, 0);
  }
  if (counters) counters->constraint_checks += checks;
  return p;
}

bool canonical_less(const HyperCombo& ha, const ResourceCombo& ra, const HyperCombo& hb,
                    const ResourceCombo& rb) {
  for (std::size_t i = 0; i < ha.per_model.size(); ++i) {
    const auto& a = ha.per_model[i];
    const auto& b = hb.per_model[i];
    if (a.l_idx != b.l_idx) return a.l_idx < b.l_idx;
    if (a.m_idx != b.m_idx) return a.m_idx < b.m_idx;
    const auto& x = ra.per_model[i];
    const auto& y = rb.per_model[i];
    if (x.psi_idx != y.psi_idx) return x.psi_idx < y.psi_idx;
    if (x.lambda_idx != y.lambda_idx) return x.lambda_idx < y.lambda_idx;
  }
  return false;
}

DecisionSpace ols_from_pairings(std::shared_ptr<const DecisionSpace::Tables> tables,
                                const Pairings& p) {
  const auto& hyper = tables->hyper;
  const auto& res = tables->resources;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arms;
  arms.reserve(p.resources.size());
  for (std::uint32_t c = 0; c < hyper.size(); ++c) {
    for (auto k = p.offsets[c]; k < p.offsets[c + 1]; ++k) arms.emplace_back(c, p.resources[k]);
  }
  if (arms.empty()) throw ConfigError("no feasible action");
  std::sort(arms.begin(), arms.end(), [&](const auto& a, const auto& b) {
    return canonical_less(hyper[a.first], res[a.second], hyper[b.first], res[b.second]);
  });
  std::vector<std::uint32_t> arm_combo(arms.size());
  std::vector<std::uint32_t> offsets(arms.size() + 1);
  std::vector<std::uint32_t> subs(arms.size());
  for (std::size_t j = 0; j < arms.size(); ++j) {
    arm_combo[j] = arms[j].first;
    subs[j] = arms[j].second;
    offsets[j + 1] = static_cast<std::uint32_t>(j + 1);
  }
  return DecisionSpace(Algorithm::kOls, std::move(tables), std::move(arm_combo),
                       std::move(offsets), std::move(subs));
}

DecisionSpace sa_from_pairings(std::shared_ptr<const DecisionSpace::Tables> tables,
                               const Pairings& p, PrelearnCounters* counters) {
  std::vector<std::uint32_t> arm_combo;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> subs;
  subs.reserve(p.resources.size());
  for (std::uint32_t c = 0; c + 1 < p.offsets.size(); ++c) {
    if (p.offsets[c] == p.offsets[c + 1]) continue;
    arm_combo.push_back(c);
    subs.insert(subs.end(), p.resources.begin() + p.offsets[c],
                p.resources.begin() + p.offsets[c + 1]);
    offsets.push_back(static_cast<std::uint32_t>(subs.size()));
    if (counters) ++counters->merge_insertions;
  }
  if (arm_combo.empty()) throw ConfigError("no feasible action");
  return DecisionSpace(Algorithm::kOlsSa, std::move(tables), std::move(arm_combo),
                       std::move(offsets), std::move(subs));
}

// b >= c in every (l_i, m_i).
bool dominates(const HyperCombo& b, const HyperCombo& c) {
  for (std::size_t i = 0; i < b.per_model.size(); ++i) {
    if (b.per_model[i].l < c.per_model[i].l || b.per_model[i].m < c.per_model[i].m) {
      return false;
    }
  }
  return true;
}

template <typename T>
void check_ascending(const std::vector<T>& v, const std::string& path,
                     std::vector<std::string>& errors) {
  if (v.empty()) {
    errors.push_back(path + ": grid is empty");
    return;
  }
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k - 1] < v[k])) {
      errors.push_back(path + ": grid must be strictly ascending");
      return;
    }
  }
}

}  // namespace

bool within_limit(double value, double limit) {
  return value <= limit + kConstraintTolerance * std::max(1.0, std::abs(limit));
}

void validate_grids(const Grids& grids, const Environment& env) {
  std::vector<std::string> errors;
  if (grids.per_model.size() != env.size()) {
    errors.push_back(fmt::format("grids: expected {} model grids, got {}", env.size(),
                                 grids.per_model.size()));
  }
  const auto& pool = env.pool();
  for (std::size_t i = 0; i < std::min(grids.per_model.size(), env.size()); ++i) {
    const auto& g = grids.per_model[i];
    const auto& spec = env.models()[i];
    const auto base = fmt::format("grids[{}]", i);
    check_ascending(g.l, base + ".l_grid", errors);
    check_ascending(g.m, base + ".m_grid", errors);
    check_ascending(g.psi, base + ".psi_grid", errors);
    check_ascending(g.lambda, base + ".lambda_grid", errors);
    for (double l : g.l) {
      if (l < spec.l_min || l > spec.l_max) {
        errors.push_back(fmt::format("{}.l_grid: {} outside [{}, {}]", base, l, spec.l_min,
                                     spec.l_max));
      }
    }
    for (int m : g.m) {
      if (m < spec.m_min || m > spec.m_max) {
        errors.push_back(fmt::format("{}.m_grid: {} outside [{}, {}]", base, m, spec.m_min,
                                     spec.m_max));
      }
    }
    for (double psi : g.psi) {
      if (!(psi > 0.0) || psi > pool.psi_max) {
        errors.push_back(
            fmt::format("{}.psi_grid: {} outside (0, {}]", base, psi, pool.psi_max));
      }
    }
    for (double lambda : g.lambda) {
      if (!(lambda > 0.0) || lambda > pool.lambda_max) {
        errors.push_back(fmt::format("{}.lambda_grid: {} outside (0, {}]", base, lambda,
                                     pool.lambda_max));
      }
    }
    if (g.l.size() > 0xFFFF || g.m.size() > 0xFFFF || g.psi.size() > 0xFFFF ||
        g.lambda.size() > 0xFFFF) {
      errors.push_back(base + ": grid has more than 65535 points");
    }
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid grids:";
    for (const auto& e : errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
}

AllocationDecision make_decision(const HyperCombo& hyper, const ResourceCombo& res) {
  AllocationDecision a;
  a.per_model.reserve(hyper.per_model.size());
  for (std::size_t i = 0; i < hyper.per_model.size(); ++i) {
    a.per_model.push_back({hyper.per_model[i].l, hyper.per_model[i].m,
                           res.per_model[i].psi, res.per_model[i].lambda});
  }
  return a;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kOls:
      return "ols";
    case Algorithm::kOlsSa:
      return "ols-sa";
    case Algorithm::kOlsRsa:
      return "ols-rsa";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view token) {
  if (token == "ols") return Algorithm::kOls;
  if (token == "ols-sa") return Algorithm::kOlsSa;
  if (token == "ols-rsa") return Algorithm::kOlsRsa;
  throw ConfigError(fmt::format("unknown algorithm '{}' (expected ols, ols-sa or ols-rsa)",
                                token));
}

DecisionSpace::DecisionSpace(Algorithm kind, std::shared_ptr<const Tables> tables,
                             std::vector<std::uint32_t> arm_combo,
                             std::vector<std::uint32_t> sub_offsets,
                             std::vector<std::uint32_t> sub_resources)
    : kind_(kind),
      tables_(std::move(tables)),
      arm_combo_(std::move(arm_combo)),
      sub_offsets_(std::move(sub_offsets)),
      sub_resources_(std::move(sub_resources)) {}

std::span<const std::uint32_t> DecisionSpace::sub_resource_indices(std::size_t arm) const {
  return std::span<const std::uint32_t>(sub_resources_)
      .subspan(sub_offsets_[arm], sub_count(arm));
}

AllocationDecision DecisionSpace::sub_action(std::size_t arm, std::size_t k) const {
  const auto r = sub_resources_[sub_offsets_[arm] + k];
  return make_decision(combo(arm), tables_->resources[r]);
}

SuperAction DecisionSpace::super_action(std::size_t arm) const {
  SuperAction sa{combo(arm), {}};
  sa.subs.reserve(sub_count(arm));
  for (std::size_t k = 0; k < sub_count(arm); ++k) sa.subs.push_back(sub_action(arm, k));
  return sa;
}

std::vector<HyperCombo> enumerate_hyperparams(const Grids& grids) {
  std::vector<HyperCombo> out{HyperCombo{}};
  for (const auto& g : grids.per_model) {
    if (g.l.empty() || g.m.empty()) throw ConfigError("empty hyper-parameter grid");
    std::vector<HyperCombo> next;
    next.reserve(out.size() * g.l.size() * g.m.size());
    for (const auto& prefix : out) {
      for (std::size_t li = 0; li < g.l.size(); ++li) {
        for (std::size_t mi = 0; mi < g.m.size(); ++mi) {
          auto c = prefix;
          c.per_model.push_back({static_cast<std::uint16_t>(li),
                                 static_cast<std::uint16_t>(mi), g.l[li], g.m[mi]});
          next.push_back(std::move(c));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<ResourceCombo> enumerate_resources(const Grids& grids) {
  std::vector<ResourceCombo> out{ResourceCombo{}};
  for (const auto& g : grids.per_model) {
    if (g.psi.empty() || g.lambda.empty()) throw ConfigError("empty resource grid");
    std::vector<ResourceCombo> next;
    next.reserve(out.size() * g.psi.size() * g.lambda.size());
    for (const auto& prefix : out) {
      for (std::size_t pi = 0; pi < g.psi.size(); ++pi) {
        for (std::size_t ri = 0; ri < g.lambda.size(); ++ri) {
          auto c = prefix;
          c.per_model.push_back({static_cast<std::uint16_t>(pi),
                                 static_cast<std::uint16_t>(ri), g.psi[pi], g.lambda[ri]});
          next.push_back(std::move(c));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<ResourceCombo> filter_resources(std::span<const ResourceCombo> combos,
                                            const Environment& env,
                                            PrelearnCounters* counters) {
  const auto& pool = env.pool();
  std::vector<ResourceCombo> out;
  for (const auto& s : combos) {
    double psi_sum = 0.0;
    double lambda_sum = 0.0;
    bool budget_ok = true;
    for (std::size_t i = 0; i < s.per_model.size(); ++i) {
      const auto& r = s.per_model[i];
      psi_sum += r.psi;
      lambda_sum += r.lambda;
      budget_ok = budget_ok && within_limit(cost(r.psi, r.lambda, pool), env.models()[i].c_max);
    }
    if (budget_ok && within_limit(psi_sum, pool.psi_max) &&
        within_limit(lambda_sum, pool.lambda_max)) {
      out.push_back(s);
    }
  }
  if (counters) counters->constraint_checks += combos.size();
  return out;
}

DecisionSpace build_ols_space(std::vector<HyperCombo> hyper,
                              std::vector<ResourceCombo> feasible_res,
                              const Environment& env, PrelearnCounters* counters) {
  const auto p = pair_feasible(hyper, feasible_res, env, counters);
  auto tables = std::make_shared<const DecisionSpace::Tables>(
      DecisionSpace::Tables{std::move(hyper), std::move(feasible_res)});
  return ols_from_pairings(std::move(tables), p);
}

DecisionSpace build_super_actions(std::vector<HyperCombo> hyper,
                                  std::vector<ResourceCombo> feasible_res,
                                  const Environment& env, PrelearnCounters* counters) {
  const auto p = pair_feasible(hyper, feasible_res, env, counters);
  auto tables = std::make_shared<const DecisionSpace::Tables>(
      DecisionSpace::Tables{std::move(hyper), std::move(feasible_res)});
  return sa_from_pairings(std::move(tables), p, counters);
}

DecisionSpace reduce_super_actions(const DecisionSpace& sa_space, PrelearnCounters* counters) {
  std::vector<std::size_t> candidates;
  std::uint64_t comparisons = 0;
  for (std::size_t b = 0; b < sa_space.size(); ++b) {
    if (candidates.empty()) {
      candidates.push_back(b);
      continue;
    }
    const auto& combo_b = sa_space.combo(b);
    bool overtaken = false;
    std::vector<std::size_t> kept;
    kept.reserve(candidates.size() + 1);
    for (auto c : candidates) {
      ++comparisons;
      const auto& combo_c = sa_space.combo(c);
      if (dominates(combo_b, combo_c)) continue;  // b overtakes c's candidacy
      if (dominates(combo_c, combo_b)) overtaken = true;
      kept.push_back(c);
    }
    if (!overtaken) {
      kept.push_back(b);
      candidates = std::move(kept);
    }
  }
  if (counters) counters->candidacy_comparisons += comparisons;
  std::sort(candidates.begin(), candidates.end());

  std::vector<std::uint32_t> arm_combo;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> subs;
  for (auto c : candidates) {
    arm_combo.push_back(sa_space.combo_index(c));
    const auto r = sa_space.sub_resource_indices(c);
    subs.insert(subs.end(), r.begin(), r.end());
    offsets.push_back(static_cast<std::uint32_t>(subs.size()));
  }
  return DecisionSpace(Algorithm::kOlsRsa, sa_space.shared_tables(), std::move(arm_combo),
                       std::move(offsets), std::move(subs));
}

bool validate_action(const AllocationDecision& a, const Environment& env) {
  if (a.per_model.size() != env.size()) return false;
  const auto& pool = env.pool();
  double psi_sum = 0.0;
  double lambda_sum = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const auto& x = a.per_model[i];
    const auto& spec = env.models()[i];
    if (!(x.psi > 0.0) || !(x.lambda > 0.0) || !(x.l > 0.0)) return false;
    if (x.l < spec.l_min || x.l > spec.l_max) return false;
    if (x.m < spec.m_min || x.m > spec.m_max) return false;
    if (!within_limit(learning_latency(x, pool), spec.d_max)) return false;
    if (!within_limit(cost(x.psi, x.lambda, pool), spec.c_max)) return false;
    psi_sum += x.psi;
    lambda_sum += x.lambda;
  }
  return within_limit(psi_sum, pool.psi_max) && within_limit(lambda_sum, pool.lambda_max);
}

std::string explain_infeasibility(const Grids& grids, const Environment& env) {
  const auto& pool = env.pool();
  const auto all = enumerate_resources(grids);
  std::vector<std::pair<std::string, std::size_t>> violations;
  std::size_t compute = 0;
  std::size_t rate = 0;
  std::vector<std::size_t> budget(env.size(), 0);
  for (const auto& s : all) {
    double psi_sum = 0.0;
    double lambda_sum = 0.0;
    for (std::size_t i = 0; i < s.per_model.size(); ++i) {
      psi_sum += s.per_model[i].psi;
      lambda_sum += s.per_model[i].lambda;
      if (!within_limit(cost(s.per_model[i].psi, s.per_model[i].lambda, pool),
                        env.models()[i].c_max)) {
        ++budget[i];
      }
    }
    compute += !within_limit(psi_sum, pool.psi_max);
    rate += !within_limit(lambda_sum, pool.lambda_max);
  }
  violations.emplace_back(fmt::format("total compute <= psi_max={}", pool.psi_max), compute);
  violations.emplace_back(fmt::format("total rate <= lambda_max={}", pool.lambda_max), rate);
  for (std::size_t i = 0; i < env.size(); ++i) {
    violations.emplace_back(
        fmt::format("model {} cost <= c_max={}", i + 1, env.models()[i].c_max), budget[i]);
  }

  std::ostringstream os;
  const auto feasible = filter_resources(all, env);
  if (feasible.empty()) {
    const auto worst = std::max_element(
        violations.begin(), violations.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    os << "no resource combination satisfies the compute, rate and budget limits; tightest "
          "constraint: "
       << worst->first << " (violated by " << worst->second << " of " << all.size()
       << " combinations)";
    return os.str();
  }

  // Best-case latency per model over its hyper grid and the feasible resources.
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t worst_model = 0;
  double worst_latency = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    const auto& g = grids.per_model[i];
    for (const auto& s : feasible) {
      const ModelAllocation a{g.l.front(), g.m.front(), s.per_model[i].psi,
                              s.per_model[i].lambda};
      best = std::min(best, learning_latency(a, pool));
    }
    const double excess = best - env.models()[i].d_max;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_model = i;
      worst_latency = best;
    }
  }
  os << "no allocation meets every deadline; tightest constraint: model " << worst_model + 1
     << " latency <= d_max=" << env.models()[worst_model].d_max
     << " (best achievable alone: " << fmt::format("{:.6g}", worst_latency) << " min)";
  if (worst_excess <= 0.0) {
    os << "; deadlines are individually reachable but not with a shared resource combination";
  }
  return os.str();
}

const DecisionSpace& SpaceBundle::space(Algorithm algorithm) const {
  switch (algorithm) {
    case Algorithm::kOls:
      return ols;
    case Algorithm::kOlsSa:
      return sa;
    case Algorithm::kOlsRsa:
      return rsa;
  }
  return ols;
}

const PrelearnCounters& SpaceBundle::ops(Algorithm algorithm) const {
  switch (algorithm) {
    case Algorithm::kOls:
      return ols_ops;
    case Algorithm::kOlsSa:
      return sa_ops;
    case Algorithm::kOlsRsa:
      return rsa_ops;
  }
  return ols_ops;
}

SpaceBundle build_spaces(const Grids& grids, const Environment& env) {
  validate_grids(grids, env);
  auto hyper = enumerate_hyperparams(grids);
  const auto all_res = enumerate_resources(grids);

  PrelearnCounters base;
  auto feasible = filter_resources(all_res, env, &base);
  const std::size_t hyper_count = hyper.size();
  const std::size_t feasible_count = feasible.size();
  if (feasible.empty()) {
    throw ConfigError("no feasible action: " + explain_infeasibility(grids, env));
  }
  const auto p = pair_feasible(hyper, feasible, env, &base);
  if (p.resources.empty()) {
    throw ConfigError("no feasible action: " + explain_infeasibility(grids, env));
  }
  auto tables = std::make_shared<const DecisionSpace::Tables>(
      DecisionSpace::Tables{std::move(hyper), std::move(feasible)});

  PrelearnCounters sa_ops = base;
  auto ols = ols_from_pairings(tables, p);
  auto sa = sa_from_pairings(tables, p, &sa_ops);
  PrelearnCounters rsa_ops = sa_ops;
  auto rsa = reduce_super_actions(sa, &rsa_ops);

  return SpaceBundle{hyper_count, all_res.size(), feasible_count,
                     std::move(ols), std::move(sa), std::move(rsa),
                     base, sa_ops, rsa_ops};
}

}  // namespace slicing
