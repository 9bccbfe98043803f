// Serial reference vs OpenMP kernel for the two hot loops.

#include <benchmark/benchmark.h>

#include "tworound/dsic.hpp"
#include "tworound/experiments.hpp"

using namespace tworound;

namespace {

CellSpec cell(int theta) { return {{450, 350, 200}, theta, 100'000, 42, YSampler::kNormalizedUniform}; }

// DSIC by the marginal check, so the search visits every context.
Mechanism full_search_mechanism() {
  return Mechanism(from_exclusion_Y(ExclusionY({0.4, 0.2, 0.2, 0.2})), AllocationRule({0.7, 0.3, 0.0}));
}

void BM_CellSerial(benchmark::State& state) {
  const auto spec = cell(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell_serial(spec));
  state.SetItemsProcessed(state.iterations() * spec.draws);
}

void BM_CellParallel(benchmark::State& state) {
  const auto spec = cell(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell_parallel(spec));
  state.SetItemsProcessed(state.iterations() * spec.draws);
}

void BM_DeviationSerial(benchmark::State& state) {
  const auto mech = full_search_mechanism();
  const BidGrid grid{0, static_cast<double>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(find_deviation_serial(mech, grid));
}

void BM_DeviationParallel(benchmark::State& state) {
  const auto mech = full_search_mechanism();
  const BidGrid grid{0, static_cast<double>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(find_deviation(mech, grid));
}

}  // namespace

BENCHMARK(BM_CellSerial)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellParallel)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeviationSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeviationParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
