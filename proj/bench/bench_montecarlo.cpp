#include "rcmu/kfactor.hpp"
#include "rcmu/montecarlo.hpp"
#include "rcmu/numeric.hpp"
#include "rcmu/synth.hpp"

#include <benchmark/benchmark.h>

using namespace rcmu;

namespace {

SimulationConfig bench_config(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.reps = static_cast<std::size_t>(state.range(0));
    cfg.seed = 7;
    return cfg;
}

void BM_SimulateSerial(benchmark::State& state) {
    const auto cfg = bench_config(state);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_k_serial(from_db(-10.0), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateOpenMP(benchmark::State& state) {
    const auto cfg = bench_config(state);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_k(from_db(-10.0), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

const SampleGrid& bench_grid() {
    static const SampleGrid grid = draw_rician_grid({0.1, 1.0, 11}, StirringLayout{25, 24}, FrequencyGrid{});
    return grid;
}

void BM_EstimateSerial(benchmark::State& state) {
    const auto& grid = bench_grid();
    for (auto _ : state) benchmark::DoNotOptimize(estimate_all_serial(grid));
}

void BM_EstimateOpenMP(benchmark::State& state) {
    const auto& grid = bench_grid();
    for (auto _ : state) benchmark::DoNotOptimize(estimate_all(grid));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateOpenMP)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EstimateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateOpenMP)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
