#include "slicing/experiment.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

#include "slicing/csv.h"
#include "slicing/errors.h"

namespace slicing {

namespace fs = std::filesystem;

RunTrace simulate(const DecisionSpace& space, const Environment& env, Exp3Learner learner,
                  const SimulationOptions& options, std::span<const std::size_t> optimal_arms) {
  if (learner.arms() != space.size()) {
    throw ConfigError(fmt::format("learner has {} arms but the space has {}", learner.arms(),
                                  space.size()));
  }
  Rng rng(options.seed);
  RunTrace trace;
  trace.seed = options.seed;
  trace.algorithm = space.kind();
  trace.eta = learner.eta();
  trace.initial_weights.assign(learner.weights().begin(), learner.weights().end());
  trace.slots.reserve(options.horizon);

  const bool grouped = space.kind() != Algorithm::kOls;
  for (std::size_t t = 1; t <= options.horizon; ++t) {
    SlotRecord rec;
    rec.selected_index = learner.sample(rng);
    const std::size_t sub =
        grouped ? sample_sub_action(space.sub_count(rec.selected_index), rng) : 0;
    rec.decision = space.sub_action(rec.selected_index, sub);
    rec.accuracies = model_accuracies(rec.decision, env, t);
    rec.performance = system_performance(rec.accuracies, env);
    rec.loss = loss(rec.performance);
    learner.update(rec.selected_index, rec.loss);
    for (auto j : optimal_arms) rec.optimal_mass += learner.weight(j);
    trace.slots.push_back(std::move(rec));

    if (options.snapshot_cadence > 0 &&
        (t % options.snapshot_cadence == 0 || t == options.horizon)) {
      trace.snapshot_slots.push_back(t);
      trace.snapshots.emplace_back(learner.weights().begin(), learner.weights().end());
    }
  }
  trace.final_weights.assign(learner.weights().begin(), learner.weights().end());
  return trace;
}

std::size_t effective_arms(const InitScheme& init, std::size_t arms) {
  return init.kind == InitScheme::Kind::kSbs ? init.subset_size : arms;
}

double resolve_eta(const EtaSetting& eta, const InitScheme& init, std::size_t arms,
                   std::size_t horizon) {
  if (!eta.automatic) return eta.value;
  const double value = optimal_eta(effective_arms(init, arms), horizon);
  if (!(value < 1.0)) {
    throw ConfigError(fmt::format("auto learning rate {} is not below 1", value));
  }
  return value;
}

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)),
      env_(config_.environment()),
      spaces_(build_spaces(config_.grids, env_)),
      oracle_(hindsight_oracle(space(), env_, config_.horizon)),
      optimal_(optimal_series(oracle_, env_, config_.horizon)),
      eta_(resolve_eta(config_.eta, config_.init, space().size(), config_.horizon)) {
  init_weights(config_.init, space().size());  // surfaces SBS/GBS range errors early
}

std::size_t Experiment::snapshot_cadence() const {
  return config_.snapshot_cadence.value_or(default_snapshot_cadence(space().size()));
}

RunTrace Experiment::run_seed(std::uint64_t seed) const {
  return run_seed(seed, eta_, snapshot_cadence());
}

RunTrace Experiment::run_seed(std::uint64_t seed, double eta, std::size_t cadence) const {
  Exp3Learner learner(init_weights(config_.init, space().size()), eta);
  return simulate(space(), env_, std::move(learner), {config_.horizon, seed, cadence},
                  oracle_.optimal_arms);
}

fs::path resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("SLICING_OUT_DIR"); env && *env) return env;
  return config.output_dir;
}

namespace {

std::vector<std::uint64_t> sorted_seeds(const ExperimentConfig& config) {
  auto seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

std::vector<std::string> run_record_header(std::size_t models) {
  std::vector<std::string> h{"seed",           "slot",           "selected_index",
                             "performance",    "loss",           "cumulative_regret",
                             "average_regret", "average_reward", "prob_optimal"};
  for (std::size_t i = 1; i <= models; ++i) h.push_back(fmt::format("q_{}", i));
  return h;
}

// Column-wise running sums for the seed average.
struct SeriesSums {
  std::vector<double> performance, loss, cumulative_regret, average_regret, average_reward,
      prob_optimal;
  std::vector<std::vector<double>> q;

  SeriesSums(std::size_t horizon, std::size_t models)
      : performance(horizon),
        loss(horizon),
        cumulative_regret(horizon),
        average_regret(horizon),
        average_reward(horizon),
        prob_optimal(horizon),
        q(models, std::vector<double>(horizon)) {}
};

}  // namespace

std::vector<fs::path> write_space_files(const Experiment& experiment, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& b = experiment.spaces();
  const auto manifest = dir / "space_manifest.csv";
  {
    CsvWriter csv(manifest);
    csv.header({"stage", "count"});
    const std::pair<const char*, std::size_t> rows[] = {
        {"hyper_combos", b.hyper_count},
        {"resource_combos", b.resource_count},
        {"feasible_resource_combos", b.feasible_resource_count},
        {"ols", b.ols.size()},
        {"ols_sa", b.sa.size()},
        {"ols_rsa", b.rsa.size()},
        {"ols_sa_sub_actions", b.sa.total_sub_actions()},
        {"ols_rsa_sub_actions", b.rsa.total_sub_actions()},
    };
    for (const auto& [stage, count] : rows) {
      csv.field(std::string_view(stage)).field(static_cast<std::uint64_t>(count));
      csv.end_row();
    }
  }

  // One row per arm of the selected space: grid indices, values and
  // feasibility metadata (sub-action count, tightest deadline slack).
  const auto& space = experiment.space();
  const auto& env = experiment.environment();
  const std::size_t n = env.size();
  const bool flat = space.kind() == Algorithm::kOls;
  const auto arms_file = dir / "arms.csv";
  CsvWriter csv(arms_file);
  std::vector<std::string> h{"index"};
  for (std::size_t i = 1; i <= n; ++i) {
    for (const char* col : {"l_idx", "m_idx", "l", "m"}) h.push_back(fmt::format("{}_{}", col, i));
    if (flat) {
      for (const char* col : {"psi_idx", "lambda_idx", "psi", "lambda"}) {
        h.push_back(fmt::format("{}_{}", col, i));
      }
    }
  }
  for (const char* col : {"sub_actions", "latency_slack", "performance"}) h.emplace_back(col);
  csv.header(h);

  const auto perf = arm_performances(space, env, 1);
  for (std::size_t j = 0; j < space.size(); ++j) {
    csv.field(static_cast<std::uint64_t>(j + 1));
    const auto& combo = space.combo(j);
    const auto& res = space.tables().resources[space.sub_resource_indices(j)[0]];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = combo.per_model[i];
      csv.field(static_cast<std::uint64_t>(c.l_idx + 1))
          .field(static_cast<std::uint64_t>(c.m_idx + 1))
          .field(c.l)
          .field(c.m);
      if (flat) {
        const auto& r = res.per_model[i];
        csv.field(static_cast<std::uint64_t>(r.psi_idx + 1))
            .field(static_cast<std::uint64_t>(r.lambda_idx + 1))
            .field(r.psi)
            .field(r.lambda);
      }
    }
    // Largest over sub-actions of the smallest per-model deadline slack.
    double slack = -1e300;
    for (std::size_t k = 0; k < space.sub_count(j); ++k) {
      const auto d = space.sub_action(j, k);
      double worst = 1e300;
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::min(worst,
                         env.models()[i].d_max - learning_latency(d.per_model[i], env.pool()));
      }
      slack = std::max(slack, worst);
    }
    csv.field(static_cast<std::uint64_t>(space.sub_count(j))).field(slack).field(perf[j]);
    csv.end_row();
  }
  return {manifest, arms_file};
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const fs::path& dir) {
  const Experiment experiment(config);
  const auto& env = experiment.environment();
  const std::size_t horizon = config.horizon;
  const std::size_t models = env.size();

  ExperimentSummary summary;
  summary.arms = experiment.space().size();
  summary.eta = experiment.eta();
  summary.optimal_performance = experiment.oracle().optimal_performance;
  summary.files = write_space_files(experiment, dir);

  const auto seeds = sorted_seeds(config);
  SeriesSums sums(horizon, models);
  for (const auto seed : seeds) {
    const auto trace = experiment.run_seed(seed);
    const auto cr = cumulative_regret(trace, experiment.optimal());
    const auto ar = average_regret(trace, experiment.optimal());
    const auto rew = average_reward(trace);

    const auto path = dir / fmt::format("run_seed_{}.csv", seed);
    CsvWriter csv(path);
    csv.header(run_record_header(models));
    for (std::size_t t = 0; t < horizon; ++t) {
      const auto& s = trace.slots[t];
      csv.field(seed)
          .field(static_cast<std::uint64_t>(t + 1))
          .field(static_cast<std::uint64_t>(s.selected_index + 1))
          .field(s.performance)
          .field(s.loss)
          .field(cr[t])
          .field(ar[t])
          .field(rew[t])
          .field(s.optimal_mass);
      for (double q : s.accuracies) csv.field(q);
      csv.end_row();

      sums.performance[t] += s.performance;
      sums.loss[t] += s.loss;
      sums.cumulative_regret[t] += cr[t];
      sums.average_regret[t] += ar[t];
      sums.average_reward[t] += rew[t];
      sums.prob_optimal[t] += s.optimal_mass;
      for (std::size_t i = 0; i < models; ++i) sums.q[i][t] += s.accuracies[i];
    }
    summary.files.push_back(path);
  }

  const double n = static_cast<double>(seeds.size());
  {
    const auto path = dir / "seed_average.csv";
    CsvWriter csv(path);
    auto h = run_record_header(models);
    h.erase(h.begin(), h.begin() + 3);  // seed, slot, selected_index
    h.insert(h.begin(), "slot");
    h.insert(h.begin() + 1, "seeds");
    csv.header(h);
    for (std::size_t t = 0; t < horizon; ++t) {
      csv.field(static_cast<std::uint64_t>(t + 1))
          .field(static_cast<std::uint64_t>(seeds.size()))
          .field(sums.performance[t] / n)
          .field(sums.loss[t] / n)
          .field(sums.cumulative_regret[t] / n)
          .field(sums.average_regret[t] / n)
          .field(sums.average_reward[t] / n)
          .field(sums.prob_optimal[t] / n);
      for (std::size_t i = 0; i < models; ++i) csv.field(sums.q[i][t] / n);
      csv.end_row();
    }
    summary.files.push_back(path);
  }
  if (horizon > 0) {
    summary.mean_final_average_reward = sums.average_reward.back() / n;
    summary.mean_final_cumulative_regret = sums.cumulative_regret.back() / n;
    summary.mean_final_prob_optimal = sums.prob_optimal.back() / n;
  }

  {
    // OA is re-solved only where the coefficients change.
    std::vector<double> oa(horizon, experiment.oracle().optimal_performance);
    if (env.has_schedule()) {
      double current = oa_oracle(experiment.spaces().ols, env, 1).optimal_performance;
      for (std::size_t t = 1; t <= horizon; ++t) {
        if (t > 1 && env.schedule().count(t)) {
          current = oa_oracle(experiment.spaces().ols, env, t).optimal_performance;
        }
        oa[t - 1] = current;
      }
    }
    std::vector<double> fa;
    if (config.baselines.fa) fa = fa_policy(*config.baselines.fa, env, horizon);

    const auto path = dir / "baselines.csv";
    CsvWriter csv(path);
    std::vector<std::string> h{"slot"};
    if (config.baselines.oa) h.emplace_back("oa_performance");
    if (!fa.empty()) {
      h.emplace_back("fa_performance");
      h.emplace_back("fa_cumulative_regret");
    }
    csv.header(h);
    double fa_regret = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      csv.field(static_cast<std::uint64_t>(t + 1));
      if (config.baselines.oa) csv.field(oa[t]);
      if (!fa.empty()) {
        fa_regret += experiment.optimal()[t] - fa[t];
        csv.field(fa[t]).field(fa_regret);
      }
      csv.end_row();
    }
    summary.files.push_back(path);
  }

  {
    const auto& b = experiment.spaces();
    const auto path = dir / "op_counters.csv";
    CsvWriter csv(path);
    csv.header({"algorithm", "arms", "constraint_checks", "merge_insertions",
                "candidacy_comparisons", "prelearn_ops", "learn_ops_per_slot"});
    for (auto algo : {Algorithm::kOls, Algorithm::kOlsSa, Algorithm::kOlsRsa}) {
      const auto& ops = b.ops(algo);
      const auto counters = count_ops(ops, b.space(algo));
      csv.field(to_string(algo))
          .field(static_cast<std::uint64_t>(b.space(algo).size()))
          .field(ops.constraint_checks)
          .field(ops.merge_insertions)
          .field(ops.candidacy_comparisons)
          .field(counters.prelearn_ops)
          .field(counters.learn_ops_per_slot);
      csv.end_row();
    }
    summary.files.push_back(path);

    const auto cpath = dir / "complexity.csv";
    CsvWriter cc(cpath);
    cc.header({"slot", "ols", "ols_sa", "ols_rsa"});
    const auto ols = cumulative_complexity(count_ops(b.ols_ops, b.ols), horizon);
    const auto sa = cumulative_complexity(count_ops(b.sa_ops, b.sa), horizon);
    const auto rsa = cumulative_complexity(count_ops(b.rsa_ops, b.rsa), horizon);
    for (std::size_t t = 0; t <= horizon; ++t) {
      cc.field(static_cast<std::uint64_t>(t)).field(ols[t]).field(sa[t]).field(rsa[t]);
      cc.end_row();
    }
    summary.files.push_back(cpath);
  }

  {
    const auto path = dir / "summary.csv";
    CsvWriter csv(path);
    csv.header({"key", "value"});
    auto row = [&](std::string_view key, auto value) {
      csv.field(key).field(value);
      csv.end_row();
    };
    row("algorithm", to_string(config.algorithm));
    row("arms", static_cast<std::uint64_t>(summary.arms));
    row("eta", summary.eta);
    row("horizon", static_cast<std::uint64_t>(horizon));
    row("seeds", static_cast<std::uint64_t>(seeds.size()));
    row("optimal_performance", summary.optimal_performance);
    row("optimal_arms", static_cast<std::uint64_t>(experiment.oracle().optimal_arms.size()));
    row("optimal_index", static_cast<std::uint64_t>(experiment.oracle().optimal_arms.front() + 1));
    row("final_average_reward", summary.mean_final_average_reward);
    row("final_cumulative_regret", summary.mean_final_cumulative_regret);
    row("final_prob_optimal", summary.mean_final_prob_optimal);
    summary.files.push_back(path);
  }
  return summary;
}

fs::path compare_etas(const ExperimentConfig& config, std::span<const EtaSetting> etas,
                      const fs::path& dir) {
  if (etas.empty()) throw ConfigError("compare-eta needs at least one learning rate");
  const Experiment experiment(config);
  const std::size_t horizon = config.horizon;
  const std::size_t arms = experiment.space().size();
  const auto seeds = sorted_seeds(config);

  std::vector<std::string> header{"slot"};
  std::vector<std::vector<double>> columns;
  for (const auto& setting : etas) {
    const double eta = resolve_eta(setting, config.init, arms, horizon);
    header.push_back(setting.automatic ? fmt::format("eta_auto_{:.9g}", eta)
                                       : fmt::format("eta_{:.9g}", eta));
    std::vector<std::vector<double>> per_seed;
    for (const auto seed : seeds) {
      per_seed.push_back(cumulative_regret(experiment.run_seed(seed, eta, 0), experiment.optimal()));
    }
    columns.push_back(mean_series(per_seed));
  }

  const std::size_t bound_arms = effective_arms(config.init, arms);
  const double eta_op = optimal_eta(bound_arms, horizon);
  header.push_back(fmt::format("bound_eta_op_{:.9g}", eta_op));

  fs::create_directories(dir);
  const auto path = dir / "compare_eta.csv";
  CsvWriter csv(path);
  csv.header(header);
  for (std::size_t t = 0; t < horizon; ++t) {
    csv.field(static_cast<std::uint64_t>(t + 1));
    for (const auto& c : columns) csv.field(c[t]);
    csv.field(regret_bound(bound_arms, eta_op, static_cast<double>(t + 1)));
    csv.end_row();
  }
  return path;
}

}  // namespace slicing
