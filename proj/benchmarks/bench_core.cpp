#include <benchmark/benchmark.h>

#include "expanse/action_zoo.hpp"
#include "expanse/group_words.hpp"
#include "expanse/pseudogroup.hpp"
#include "expanse/separation_entropy.hpp"

using namespace expanse;

static void BM_FreeBall(benchmark::State& state) {
  const GroupSpec g = GroupSpec::free_group(2);
  for (auto _ : state) benchmark::DoNotOptimize(ball(g, static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(ball_size(g, static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_FreeBall)->Arg(6)->Arg(8)->Arg(10);

static void BM_OrbitTable(benchmark::State& state) {
  const Action a = make_example_31();
  const Ball k = ball(a.group(), static_cast<int>(state.range(0)));
  const auto pts = sample_grid(a.space(), 32);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_table(a, k, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k.size() * pts.size()));
}
BENCHMARK(BM_OrbitTable)->Arg(3)->Arg(5);

static void BM_GreedyPacking(benchmark::State& state) {
  const Action cat = make_cat_map();
  const auto pts = sample_grid(cat.space(), static_cast<int>(state.range(0)));
  const OrbitTable t = orbit_table(cat, ball(cat.group(), 4), pts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_separated_indices(t, cat.space(), 4, 0.05));
  }
}
BENCHMARK(BM_GreedyPacking)->Arg(50)->Arg(100);

static void BM_MinSeparatingRadius(benchmark::State& state) {
  const Action a = make_example_32();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        min_separating_radius(a, circle_point(0.1), circle_point(0.1 + 1e-3), 0.2, 12));
  }
}
BENCHMARK(BM_MinSeparatingRadius);

static void BM_PgSeparation(benchmark::State& state) {
  const PseudoGroupSpec o = make_pseudogroup_spec("dyadic_overlap");
  for (auto _ : state) {
    benchmark::DoNotOptimize(pg_min_separating_size(o, 0.3, 0.3 + 1.0 / 512, 0.1, 10));
  }
}
BENCHMARK(BM_PgSeparation);

BENCHMARK_MAIN();
