#include <benchmark/benchmark.h>

#include "gnep/bnc.hpp"
#include "gnep/instances.hpp"

namespace {

void BM_AppendixB(benchmark::State& state) {
  const auto inst = gnep::appendix_b_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(gnep::solve(inst));
}
BENCHMARK(BM_AppendixB);

void BM_KnapsackGame(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto strategy = static_cast<gnep::CutStrategy>(state.range(1));
  const auto inst = gnep::gen_knapsack({2, m, 0.5, gnep::Correlation::Uncorrelated, true, 0});
  gnep::SolverConfig cfg;
  cfg.cut_strategy = strategy;
  std::size_t nodes = 0;
  for (auto _ : state) {
    const auto res = gnep::solve(inst, cfg);
    nodes = res.stats.nodes_visited;
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.SetLabel(std::string(gnep::to_string(strategy)));
}
BENCHMARK(BM_KnapsackGame)
    ->ArgsProduct({{5, 10}, {static_cast<int>(gnep::CutStrategy::Equilibrium),
                             static_cast<int>(gnep::CutStrategy::Intersection)}})
    ->Unit(benchmark::kMillisecond);

void BM_GeneralizedKnapsack(benchmark::State& state) {
  const auto inst = gnep::gen_generalized_knapsack(
      {3, static_cast<std::size_t>(state.range(0)), 0.5, gnep::Correlation::Weak, 0, {}});
  for (auto _ : state) benchmark::DoNotOptimize(gnep::solve(inst));
}
BENCHMARK(BM_GeneralizedKnapsack)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ImplementationGame(benchmark::State& state) {
  gnep::RandomGraphParams g;
  g.seed = static_cast<std::uint64_t>(state.range(0));
  const auto inst = gnep::gen_implementation_game(gnep::random_implementation_params(g));
  for (auto _ : state) benchmark::DoNotOptimize(gnep::solve(inst));
}
BENCHMARK(BM_ImplementationGame)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
