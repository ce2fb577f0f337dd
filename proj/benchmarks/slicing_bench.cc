#include <benchmark/benchmark.h>

#include "slicing/experiment.h"

namespace {

const std::string kConfigDir = SLICING_CONFIG_DIR;

void BM_BuildSpaces(benchmark::State& state, const char* file) {
  const auto c = slicing::load_config(kConfigDir + "/" + file);
  const auto env = c.environment();
  for (auto _ : state) {
    auto b = slicing::build_spaces(c.grids, env);
    benchmark::DoNotOptimize(b.rsa.size());
  }
}
BENCHMARK_CAPTURE(BM_BuildSpaces, two_model, "table3_2model.json")->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_BuildSpaces, four_model, "table3_4model.json")->Unit(benchmark::kMillisecond);

void BM_Exp3Update(benchmark::State& state) {
  const auto arms = static_cast<std::size_t>(state.range(0));
  slicing::Exp3Learner learner(slicing::init_weights(slicing::InitScheme::uniform(), arms), 0.001);
  slicing::Rng rng(1);
  for (auto _ : state) {
    const auto j = learner.sample(rng);
    learner.update(j, 0.3);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exp3Update)->Arg(6)->Arg(90)->Arg(720)->Arg(9680);

void BM_RunSeed(benchmark::State& state) {
  auto c = slicing::load_config(kConfigDir + "/table3_2model.json");
  c.algorithm = slicing::Algorithm::kOlsRsa;
  c.horizon = 5000;
  const slicing::Experiment e(c);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto t = e.run_seed(seed++, e.eta(), 0);
    benchmark::DoNotOptimize(t.slots.back().performance);
  }
}
BENCHMARK(BM_RunSeed)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
