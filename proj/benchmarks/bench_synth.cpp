#include <benchmark/benchmark.h>

#include "sonartex/rng.hpp"
#include "sonartex/synth.hpp"

using namespace sonartex;

static void BM_GenStatistical(benchmark::State& state) {
    const DatasetSpec spec = default_spec(DatasetKind::statistical);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(gen_statistical_sample(spec.classes[0], spec, rng));
    }
}
BENCHMARK(BM_GenStatistical);

static void BM_GenStructural(benchmark::State& state) {
    const DatasetSpec spec = default_spec(DatasetKind::structural);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(gen_structural_sample(spec.classes[0], spec, rng));
    }
}
BENCHMARK(BM_GenStructural);

static void BM_GenMixed(benchmark::State& state) {
    const DatasetSpec spec = default_spec(DatasetKind::mixed);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(gen_mixed_sample(spec.classes[0], spec, rng));
    }
}
BENCHMARK(BM_GenMixed);

static void BM_BackgroundNoise(benchmark::State& state) {
    NoiseModel model;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(gen_background_noise(model, 160000, 32000, rng));
    }
}
BENCHMARK(BM_BackgroundNoise);
