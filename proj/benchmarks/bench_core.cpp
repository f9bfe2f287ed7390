#include <benchmark/benchmark.h>

#include <vector>

#include "gai/algorithms.hpp"
#include "gai/bandit_instance.hpp"
#include "gai/datasets.hpp"
#include "gai/random.hpp"
#include "gai/training.hpp"
#include "gai/trajectory.hpp"
#include "gai/ucb_index.hpp"

using namespace gai;

static void BM_IndexAndPolicy(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(1);
  std::vector<double> means(k), radii(k), policy(k);
  for (std::size_t i = 0; i < k; ++i) {
    means[i] = uniform01(rng);
    radii[i] = 0.1 * uniform01(rng);
  }
  IndexSnapshot snap;
  for (auto _ : state) {
    compute_index(means, radii, 0.7, snap);
    const double g = coldness(snap, 0.1);
    softmax_policy(snap.index, g, policy);
    benchmark::DoNotOptimize(sample_arm(policy, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k));
}
BENCHMARK(BM_IndexAndPolicy)->Arg(20)->Arg(50)->Arg(1000);

static void BM_Episode(benchmark::State& state) {
  const auto algo = static_cast<Algorithm>(state.range(0));
  const BanditInstance inst =
      make_preset_instance(scaled_preset(preset(PresetName::SynthSmall), 0.4), 1);
  AlgorithmSpec spec;
  spec.name = algo;
  spec.hyper.beta = 0.7;
  const std::int64_t horizon = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_gai_episode(spec, inst, horizon, 3).pulls.size());
  }
  state.SetLabel(std::string(to_string(algo)));
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Episode)
    ->Arg(static_cast<int>(Algorithm::HDoC))
    ->Arg(static_cast<int>(Algorithm::TTTS))
    ->Arg(static_cast<int>(Algorithm::SoftUCBG))
    ->Unit(benchmark::kMillisecond);

static void BM_Gradient(benchmark::State& state) {
  const BanditInstance inst =
      make_preset_instance(scaled_preset(preset(PresetName::SynthSmall), 0.4), 1);
  AlgorithmSpec spec;
  spec.name = Algorithm::SoftUCBG;
  spec.hyper.beta = 0.7;
  TrajectoryBuffer buffer;
  EpisodeOptions opt;
  opt.buffer = &buffer;
  run_gai_episode(spec, inst, 5000, 2, opt);
  TrainableParams p;
  p.beta = 0.7;
  p.alpha = 0.1;
  const auto obj = static_cast<Objective>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(obj, buffer, inst, p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buffer.size()));
}
BENCHMARK(BM_Gradient)
    ->Arg(static_cast<int>(Objective::Sampling))
    ->Arg(static_cast<int>(Objective::Identification))
    ->Arg(static_cast<int>(Objective::Combined))
    ->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
