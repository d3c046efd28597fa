#include <benchmark/benchmark.h>

#include "rrtlab/coalescent.hpp"
#include "rrtlab/empirical.hpp"
#include "rrtlab/tracked.hpp"
#include "rrtlab/tree.hpp"

namespace {

using namespace rrtlab;

void BM_GrowRrt(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(grow_rrt(n, rng));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GrowRrt)->RangeMultiplier(16)->Range(1 << 8, 1 << 20);

void BM_Degrees(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Rng rng(2);
  const auto tree = grow_rrt(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(degrees(tree));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Degrees)->Arg(1 << 16)->Arg(1 << 20);

void BM_RunKingman(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Rng rng(3);
  const Label tracked[] = {1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(run_kingman(n, rng, tracked));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunKingman)->RangeMultiplier(16)->Range(1 << 8, 1 << 16);

// Full chain versus the skip sampler for the same tracked vertices.
void BM_Tracked(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto k = static_cast<std::uint32_t>(state.range(1));
  const auto mode = state.range(2) ? TrackedMode::kSkip : TrackedMode::kStepwise;
  TrackedCoalescent tc(n, k, mode);
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(tc.run(rng));
}
BENCHMARK(BM_Tracked)
    ->Args({1 << 12, 1, 0})
    ->Args({1 << 12, 1, 1})
    ->Args({1 << 20, 1, 1})
    ->Args({1 << 20, 2, 1})
    ->Args({1 << 20, 4, 1});

// One rejection trial as run by the conditional experiment at a = 1.
void BM_TrackedRejection(benchmark::State& state) {
  const std::uint32_t n = 1u << 20;
  const std::uint32_t min_degree[] = {20};
  TrackedCoalescent tc(n, 1, TrackedMode::kSkip);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = Rng::for_stream(5, i++);
    benchmark::DoNotOptimize(tc.run(rng, min_degree));
  }
}
BENCHMARK(BM_TrackedRejection);

void BM_HighDegreeVertices(benchmark::State& state) {
  const std::uint32_t n = 1u << 20;
  Rng rng(6);
  const auto tree = grow_rrt(n, rng);
  const auto deg = degrees(tree);
  for (auto _ : state) benchmark::DoNotOptimize(high_degree_vertices(tree, deg, -2));
}
BENCHMARK(BM_HighDegreeVertices);

}  // namespace

BENCHMARK_MAIN();
