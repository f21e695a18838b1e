#include <benchmark/benchmark.h>

#include <cmath>

#include "sonartex/rng.hpp"
#include "sonartex/texture.hpp"

using namespace sonartex;

namespace {

SignalBuffer noise_clip(std::size_t n) {
    Rng rng(1);
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.resize(n);
    for (auto& v : s.samples) v = 0.3 * rng.gaussian();
    return s;
}

} // namespace

static void BM_StatsScore(benchmark::State& state) {
    const SignalBuffer s = noise_clip(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats_score(s));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StatsScore)->Arg(32000)->Arg(160000);

static void BM_StrtsScore(benchmark::State& state) {
    const SignalBuffer s = noise_clip(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(strts_score(s));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StrtsScore)->Arg(32000)->Arg(160000);

static void BM_AutocorrNormalized(benchmark::State& state) {
    const SignalBuffer s = noise_clip(static_cast<std::size_t>(state.range(0)));
    const std::size_t tau_max = s.size() / 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(autocorr_normalized(s, tau_max));
    }
}
BENCHMARK(BM_AutocorrNormalized)->RangeMultiplier(4)->Range(8192, 524288);

static void BM_SelfSimilarity(benchmark::State& state) {
    const SignalBuffer s = noise_clip(160000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(self_similarity(s, 2048, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_SelfSimilarity)->Arg(512)->Arg(1024);
