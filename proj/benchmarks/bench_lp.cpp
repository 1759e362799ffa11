#include <benchmark/benchmark.h>

#include <random>

#include "gnep/instances.hpp"
#include "gnep/lp.hpp"
#include "gnep/milp.hpp"
#include "gnep/relaxation.hpp"

namespace {

gnep::LpProblem dense_lp(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  gnep::LpProblem lp;
  for (std::size_t j = 0; j < n; ++j) lp.add_var(0.0, 10.0, coef(rng));
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<double> a(n);
    for (auto& v : a) v = coef(rng);
    lp.add_row(a, gnep::RowSense::LessEqual, 1.0 + std::abs(coef(rng)));
  }
  return lp;
}

void BM_SolveLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto lp = dense_lp(n, n / 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gnep::solve_lp(lp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveLp)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_RootRelaxation(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto inst = gnep::gen_knapsack({2, m, 0.5, gnep::Correlation::Weak, true, 7});
  const auto data = gnep::prepare_relaxation(inst);
  for (auto _ : state)
    benchmark::DoNotOptimize(gnep::solve_node_relaxation(data, inst.lower_bounds(),
                                                         inst.upper_bounds(), {}, 1e-6));
}
BENCHMARK(BM_RootRelaxation)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_CornerCone(benchmark::State& state) {
  const auto lp = dense_lp(static_cast<std::size_t>(state.range(0)),
                           static_cast<std::size_t>(state.range(0)) / 2, 3);
  const auto sol = gnep::solve_lp(lp);
  for (auto _ : state) benchmark::DoNotOptimize(gnep::extract_corner_cone(sol, lp));
}
BENCHMARK(BM_CornerCone)->Arg(16)->Arg(64);

void BM_BestResponseMilp(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto inst = gnep::gen_knapsack({2, m, 0.5, gnep::Correlation::Strong, true, 11});
  const std::vector<double> x(inst.num_vars(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(gnep::best_response(inst, 0, x));
}
BENCHMARK(BM_BestResponseMilp)->Arg(10)->Arg(20)->Arg(40);

}  // namespace
