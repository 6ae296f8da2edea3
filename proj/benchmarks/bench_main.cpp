#include <benchmark/benchmark.h>

#include "mplab/ensemble.hpp"
#include "mplab/local_law.hpp"
#include "mplab/mp_analytics.hpp"
#include "mplab/pleijel.hpp"
#include "mplab/resolvent.hpp"
#include "mplab/spectrum.hpp"

using namespace mplab;

static void BM_SampleMatrix(benchmark::State& state) {
    const long N = state.range(0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ensemble::sample_matrix(N, {}, seed++));
    }
}
BENCHMARK(BM_SampleMatrix)->Arg(256)->Arg(1024);

static void BM_Spectrum(benchmark::State& state) {
    auto X = ensemble::sample_matrix(state.range(0), {}, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(resolvent::compute_spectrum(X));
    }
}
BENCHMARK(BM_Spectrum)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Resolvents(benchmark::State& state) {
    auto X = ensemble::sample_matrix(state.range(0), {}, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(resolvent::build_resolvents(X, {2.0, 0.1}));
    }
}
BENCHMARK(BM_Resolvents)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_RRankOne(benchmark::State& state) {
    auto X = ensemble::sample_matrix(state.range(0), {}, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(locallaw::compute_R(X, {2.0, 0.5}, {}, locallaw::RMethod::rank_one));
    }
}
BENCHMARK(BM_RRankOne)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_RExplicit(benchmark::State& state) {
    auto X = ensemble::sample_matrix(state.range(0), {}, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(locallaw::compute_R(X, {2.0, 0.5}));
    }
}
BENCHMARK(BM_RExplicit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PleijelEmpirical(benchmark::State& state) {
    const long N = state.range(0);
    auto spec = resolvent::compute_spectrum(ensemble::sample_matrix(N, {}, 3));
    auto m = counting::AtomicTransform::from_spectrum(spec.eigenvalues, N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(counting::pleijel_count(m, 2.0, 1.4 / static_cast<double>(N)));
    }
}
BENCHMARK(BM_PleijelEmpirical)->Arg(128)->Arg(1024);

static void BM_ClassicalLocation(benchmark::State& state) {
    long a = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mp::classical_location(a, 1024));
        a = a % 1024 + 1;
    }
}
BENCHMARK(BM_ClassicalLocation);

BENCHMARK_MAIN();
