#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "slicing/config.h"
#include "slicing/errors.h"
#include "slicing/experiment.h"

namespace {

struct Common {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seeds", c.seeds, "override the config's seed list")->delimiter(',');
  cmd->add_option("--out", c.out, "output directory (overrides SLICING_OUT_DIR and config)");
}

slicing::ExperimentConfig load(const Common& c) {
  auto config = slicing::load_config(c.config_path);
  if (!c.seeds.empty()) config.seeds = c.seeds;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint resource / hyper-parameter allocation with EXP3 learners"};
  app.require_subcommand(1);

  Common run_opts, space_opts, eta_opts;
  auto* run = app.add_subcommand("run", "build the spaces, run every seed, write CSVs");
  add_common(run, run_opts);
  auto* space = app.add_subcommand("space", "write the space manifest and arm listing only");
  add_common(space, space_opts);
  auto* cmp = app.add_subcommand("compare-eta", "cumulative regret per learning rate");
  add_common(cmp, eta_opts);
  std::vector<std::string> eta_tokens;
  cmp->add_option("--etas", eta_tokens, "learning rates, numbers or 'auto'")
      ->delimiter(',')
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = load(run_opts);
      const auto dir = slicing::resolve_output_dir(config, run_opts.out);
      const auto s = slicing::run_experiment(config, dir);
      fmt::print("arms={} eta={:.9g} f*={:.9g} final_avg_reward={:.9g} "
                 "final_regret={:.9g} final_prob_optimal={:.9g}\n",
                 s.arms, s.eta, s.optimal_performance, s.mean_final_average_reward,
                 s.mean_final_cumulative_regret, s.mean_final_prob_optimal);
      fmt::print("wrote {} files to {}\n", s.files.size(), dir.string());
    } else if (*space) {
      const auto config = load(space_opts);
      const auto dir = slicing::resolve_output_dir(config, space_opts.out);
      const slicing::Experiment experiment(config);
      const auto& b = experiment.spaces();
      fmt::print("hyper={} resources={} feasible_resources={} ols={} ols_sa={} ols_rsa={}\n",
                 b.hyper_count, b.resource_count, b.feasible_resource_count, b.ols.size(),
                 b.sa.size(), b.rsa.size());
      for (const auto& f : slicing::write_space_files(experiment, dir)) {
        fmt::print("wrote {}\n", f.string());
      }
    } else if (*cmp) {
      const auto config = load(eta_opts);
      const auto dir = slicing::resolve_output_dir(config, eta_opts.out);
      std::vector<slicing::EtaSetting> etas;
      for (const auto& token : eta_tokens) etas.push_back(slicing::parse_eta(token));
      fmt::print("wrote {}\n", slicing::compare_etas(config, etas, dir).string());
    }
  } catch (const slicing::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
