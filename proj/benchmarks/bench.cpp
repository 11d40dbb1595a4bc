#include <benchmark/benchmark.h>

#include "nonlin_mdp/builders.hpp"
#include "nonlin_mdp/oracle.hpp"
#include "nonlin_mdp/random_models.hpp"
#include "nonlin_mdp/solver.hpp"

using namespace nonlin_mdp;

namespace {

FiniteModel bench_model(int states, int actions) {
    RandomModelOptions o;
    o.n_states = states;
    o.n_actions = actions;
    return make_random_model(12345, o);
}

void BM_bellman_sweep(benchmark::State& state) {
    auto m = bench_model(static_cast<int>(state.range(0)), 4);
    auto d = make_linear(0.9);
    auto v = make_random_values(1, m.num_states(), -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(bellman_T(m, d, v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_bellman_sweep)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_value_iterate(benchmark::State& state) {
    auto m = bench_model(static_cast<int>(state.range(0)), 4);
    auto d = make_linear(0.9);
    for (auto _ : state) benchmark::DoNotOptimize(value_iterate(m, d, 1e-8, 100000));
}
BENCHMARK(BM_value_iterate)->RangeMultiplier(2)->Range(8, 128);

void BM_value_iterate_log_blend(benchmark::State& state) {
    auto m = bench_model(static_cast<int>(state.range(0)), 4);
    auto d = make_log_blend(0.5, LogBlendVariant::one);
    for (auto _ : state) benchmark::DoNotOptimize(value_iterate(m, d, 1e-8, 100000));
}
BENCHMARK(BM_value_iterate_log_blend)->RangeMultiplier(2)->Range(8, 128);

void BM_howard(benchmark::State& state) {
    auto m = bench_model(static_cast<int>(state.range(0)), 4);
    auto d = make_linear(0.9);
    auto f0 = make_random_policy(2, m);
    // improvement gap must dominate the evaluation tolerance or ties cycle
    for (auto _ : state) benchmark::DoNotOptimize(howard_solve(m, d, f0, 1e-10, 100, 1e-7));
}
BENCHMARK(BM_howard)->RangeMultiplier(2)->Range(8, 64);

void BM_history_tree(benchmark::State& state) {
    auto m = bench_model(4, 2);
    auto d = make_log_blend(0.5, LogBlendVariant::one);
    auto hp = oracle::HistoryPolicy::from_markov(make_random_policy(3, m));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oracle::enumerate_histories_Un(m, d, hp, n, 0));
}
BENCHMARK(BM_history_tree)->DenseRange(2, 6);

void BM_growth_preset_solve(benchmark::State& state) {
    builders::ShockDistribution shocks{{0.5, 1.5}, {0.5, 0.5}};
    auto bm = builders::build_growth1(4.0, static_cast<int>(state.range(0)), shocks, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(value_iterate(bm.model, bm.discount, 1e-8, 100000));
}
BENCHMARK(BM_growth_preset_solve)->Arg(9)->Arg(17)->Arg(33)->Arg(65);

void BM_parallel_sweep(benchmark::State& state) {
    auto m = bench_model(256, 4);
    auto d = make_linear(0.9);
    auto v = make_random_values(1, m.num_states(), -1.0, 1.0);
    set_sweep_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bellman_T(m, d, v));
    set_sweep_threads(1);
}
BENCHMARK(BM_parallel_sweep)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

} // namespace

BENCHMARK_MAIN();
