// Optimized vs reference kernels, and parallel vs serial replica maps.

#include "levyshe/chain_kernels.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/partition.hpp"
#include "levyshe/replicas.hpp"

#include <benchmark/benchmark.h>

using namespace levyshe;

namespace {

Environment bench_env(int d, std::size_t n) {
    const Window w = Window::box(d, 1.0, 3.0);
    const auto m = LevyMeasure::alpha_stable(1.5);
    // choose a so that the expected atom count is about n
    const double a = std::pow(static_cast<double>(n) / w.volume(), -1.0 / 1.5);
    return sample_environment(m, w, a, 42);
}

void BM_ForwardChain(benchmark::State& state) {
    const auto env = bench_env(static_cast<int>(state.range(1)), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_weights(env, 1.0).log_forward.data());
    state.counters["atoms"] = static_cast<double>(env.size());
}

void BM_ForwardChainReference(benchmark::State& state) {
    const auto env = bench_env(static_cast<int>(state.range(1)), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_weights_reference(env, 1.0).log_forward.data());
    state.counters["atoms"] = static_cast<double>(env.size());
}

MomentConfig replica_config(std::size_t n) {
    MomentConfig cfg;
    cfg.a = 0.3;
    cfg.t = 2.0;
    cfg.n = n;
    return cfg;
}

void BM_ReplicasParallel(benchmark::State& state) {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    const auto cfg = replica_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_log_values(m, cfg, true).data());
}

void BM_ReplicasSerial(benchmark::State& state) {
    const auto m = LevyMeasure::atom(1.0, 1.0);
    const auto cfg = replica_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_log_values(m, cfg, false).data());
}

} // namespace

BENCHMARK(BM_ForwardChain)->ArgsProduct({{100, 1000, 4000}, {1, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardChainReference)->ArgsProduct({{100, 1000, 4000}, {1, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicasParallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicasSerial)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
