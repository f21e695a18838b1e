#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "sonartex/dsp.hpp"
#include "sonartex/fft.hpp"
#include "sonartex/rng.hpp"

using namespace sonartex;

namespace {

SignalBuffer tone_clip(std::size_t n, std::uint32_t rate) {
    SignalBuffer s;
    s.sample_rate_hz = rate;
    s.samples.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        s.samples[t] = 0.5 * std::sin(2.0 * M_PI * 1000.0 * static_cast<double>(t) / rate);
    return s;
}

} // namespace

static void BM_FftPow2(benchmark::State& state) {
    Rng rng(2);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(state.range(0)));
    for (auto& v : buf) v = {rng.gaussian(), 0.0};
    for (auto _ : state) {
        auto copy = buf;
        fft_pow2(copy, false);
        benchmark::DoNotOptimize(copy);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftPow2)->RangeMultiplier(4)->Range(1024, 262144)->Complexity(benchmark::oNLogN);

static void BM_Stft(benchmark::State& state) {
    const SignalBuffer s = tone_clip(160000, 32000);
    SpectrogramConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stft_magnitude(s, cfg));
    }
}
BENCHMARK(BM_Stft);

static void BM_LogMel(benchmark::State& state) {
    const SignalBuffer s = tone_clip(160000, 32000);
    SpectrogramConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_mel(s, cfg));
    }
}
BENCHMARK(BM_LogMel);

static void BM_Resample48to32(benchmark::State& state) {
    const SignalBuffer s = tone_clip(240000, 48000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(resample(s, 32000));
    }
    state.SetItemsProcessed(state.iterations() * 240000);
}
BENCHMARK(BM_Resample48to32);

BENCHMARK_MAIN();
