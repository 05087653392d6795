#include <benchmark/benchmark.h>

#include "splitq/decomposition.hpp"
#include "splitq/rng.hpp"
#include "splitq/sim.hpp"
#include "splitq/verification.hpp"

using namespace splitq;

namespace {

void BM_Analyze(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainSpec spec = build_worst_case(n, Rate(1), Rate(18), Epsilon(2),
                                            Discipline::ExponentialService);
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze(spec).micro_total_time);
    }
}
BENCHMARK(BM_Analyze)->Arg(2)->Arg(16)->Arg(256);

void BM_DefaultSweep(benchmark::State& state) {
    const SweepScenario scenario{WorstCase{Epsilon(2)}, 2, Rate(18),
                                 Discipline::ExponentialService};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(scenario, default_lambda_grid(scenario)).rows.size());
    }
}
BENCHMARK(BM_DefaultSweep);

void BM_ExponentialSampling(benchmark::State& state) {
    SplitMix64 rng(1);
    const Rate rate(2.0);
    double acc = 0.0;
    for (auto _ : state) {
        acc += exponential_sample(rng, rate);
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_ExponentialSampling);

void BM_TandemSimulation(benchmark::State& state) {
    const ChainSpec spec = build_best_case(2, Rate(1), Rate(2.5),
                                           Discipline::ExponentialService);
    sim::SimConfig config;
    config.jobs_per_replication = state.range(0);
    config.replications = 1;
    config.seed = 42;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::simulate_chain(spec, config).mean_sojourn);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TandemSimulation)->Arg(10'000)->Arg(100'000)->UseRealTime();

void BM_TheoremTrials(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_theorem_trials(state.range(0), 1).all_passed());
    }
}
BENCHMARK(BM_TheoremTrials)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
