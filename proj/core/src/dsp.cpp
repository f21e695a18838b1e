#include "sonartex/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sonartex/errors.hpp"
#include "sonartex/fft.hpp"

namespace sonartex {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void validate_config(const SpectrogramConfig& cfg) {
    if (cfg.window_len < 2) throw ValidationError("window_len must be >= 2");
    if (cfg.hop < 1 || cfg.hop > cfg.window_len)
        throw ValidationError("hop must be in [1, window_len]");
    if (cfg.n_mels < 1) throw ValidationError("n_mels must be >= 1");
    if (cfg.sample_rate_hz == 0) throw ValidationError("sample_rate_hz must be positive");
    if (cfg.log_floor <= 0) throw ValidationError("log_floor must be positive");
}

std::vector<double> hann_window(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(kTwoPi * i / n);
    return w;
}

// Modified Bessel function I0, power series.
double bessel_i0(double x) {
    const double half = x / 2.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half / k) * (half / k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = 3.141592653589793238462643 * x;
    return std::sin(px) / px;
}

} // namespace

std::size_t frame_count(std::size_t n_samples, std::size_t window_len, std::size_t hop) {
    if (n_samples < window_len || window_len == 0 || hop == 0) return 0;
    return (n_samples - window_len) / hop + 1;
}

Matrix stft_magnitude(const SignalBuffer& signal, const SpectrogramConfig& cfg) {
    validate_config(cfg);
    const std::size_t w = static_cast<std::size_t>(cfg.window_len);
    const std::size_t hop = static_cast<std::size_t>(cfg.hop);
    const std::size_t frames = frame_count(signal.size(), w, hop);
    if (frames == 0)
        throw ValidationError("signal shorter than one window (" +
                              std::to_string(signal.size()) + " < " + std::to_string(w) + ")");
    const std::size_t bins = w / 2 + 1;
    const std::vector<double> window = hann_window(cfg.window_len);

    Matrix out(frames, bins);
    std::vector<std::complex<double>> buf(w);
    for (std::size_t f = 0; f < frames; ++f) {
        const double* src = signal.samples.data() + f * hop;
        for (std::size_t i = 0; i < w; ++i) buf[i] = {src[i] * window[i], 0.0};
        auto spec = dft(std::move(buf), false);
        for (std::size_t b = 0; b < bins; ++b) out(f, b) = std::abs(spec[b]);
        buf = std::move(spec); // reuse storage
    }
    return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbankResult mel_filterbank(const SpectrogramConfig& cfg) {
    validate_config(cfg);
    const std::size_t bins = static_cast<std::size_t>(cfg.window_len) / 2 + 1;
    const std::size_t n_mels = static_cast<std::size_t>(cfg.n_mels);
    const double nyquist = cfg.sample_rate_hz / 2.0;
    const double mel_max = hz_to_mel(nyquist);

    // n_mels + 2 edge points, equally spaced in mel; filter m spans
    // [edge m, edge m+2] and peaks at edge m+1. Weights are linear in mel.
    std::vector<double> edges(n_mels + 2);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = mel_max * static_cast<double>(i) / static_cast<double>(n_mels + 1);

    MelFilterbankResult result;
    result.weights = Matrix(n_mels, bins);
    const double hz_per_bin = static_cast<double>(cfg.sample_rate_hz) / cfg.window_len;
    for (std::size_t b = 0; b < bins; ++b) {
        const double mel = hz_to_mel(b * hz_per_bin);
        for (std::size_t m = 0; m < n_mels; ++m) {
            const double lo = edges[m];
            const double center = edges[m + 1];
            const double hi = edges[m + 2];
            if (mel < lo || mel > hi) continue;
            const double weight = mel <= center
                                      ? (center > lo ? (mel - lo) / (center - lo) : 1.0)
                                      : (hi > center ? (hi - mel) / (hi - center) : 1.0);
            result.weights(m, b) = std::max(0.0, weight);
        }
    }
    for (std::size_t m = 0; m < n_mels; ++m) {
        bool empty = true;
        for (std::size_t b = 0; b < bins; ++b) {
            if (result.weights(m, b) > 0.0) {
                empty = false;
                break;
            }
        }
        if (empty) ++result.empty_filters;
    }
    return result;
}

MelSpectrogram log_mel(const SignalBuffer& signal, const SpectrogramConfig& cfg) {
    const Matrix mag = stft_magnitude(signal, cfg);
    const MelFilterbankResult fb = mel_filterbank(cfg);
    const std::size_t frames = mag.rows;
    const std::size_t bins = mag.cols;
    const std::size_t n_mels = fb.weights.rows;

    MelSpectrogram out;
    out.values = Matrix(frames, n_mels);
    out.frame_times_s.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        out.frame_times_s[f] = static_cast<double>(f * cfg.hop) / cfg.sample_rate_hz;
        for (std::size_t m = 0; m < n_mels; ++m) {
            double acc = 0.0;
            const double* w = fb.weights.row(m);
            const double* s = mag.row(f);
            for (std::size_t b = 0; b < bins; ++b) acc += w[b] * s[b] * s[b];
            out.values(f, m) = std::log(std::max(acc, cfg.log_floor));
        }
    }
    return out;
}

SignalBuffer resample(const SignalBuffer& signal, std::uint32_t target_hz) {
    if (target_hz == 0) throw ValidationError("resample: target_hz must be positive");
    if (signal.sample_rate_hz == 0)
        throw ValidationError("resample: source rate must be positive");
    if (target_hz == signal.sample_rate_hz) return signal;

    const std::uint64_t src = signal.sample_rate_hz;
    const std::uint64_t dst = target_hz;
    const double ratio = static_cast<double>(src) / static_cast<double>(dst);

    // 64-tap Kaiser-windowed sinc, beta 8.6, tabulated at kPhases fractional
    // offsets with linear interpolation in between. Cutoff backs off the
    // output Nyquist when decimating.
    constexpr int kHalf = 32;
    constexpr int kTaps = 2 * kHalf;
    constexpr int kPhases = 512;
    constexpr double kBeta = 8.6;
    constexpr double kRolloff = 0.945;
    const double cutoff = 0.5 * kRolloff / std::max(1.0, ratio); // cycles per source sample
    const double i0_beta = bessel_i0(kBeta);

    std::vector<double> taps(static_cast<std::size_t>(kPhases + 1) * kTaps);
    for (int p = 0; p <= kPhases; ++p) {
        const double frac = static_cast<double>(p) / kPhases;
        double sum = 0.0;
        for (int i = 0; i < kTaps; ++i) {
            const double t = (i - kHalf + 1) - frac; // offsets in [-kHalf, kHalf)
            const double x = t / kHalf;
            double w = 0.0;
            if (x > -1.0 && x < 1.0)
                w = 2.0 * cutoff * sinc(2.0 * cutoff * t) *
                    (bessel_i0(kBeta * std::sqrt(1.0 - x * x)) / i0_beta);
            taps[static_cast<std::size_t>(p) * kTaps + i] = w;
            sum += w;
        }
        // unit DC gain per phase
        for (int i = 0; i < kTaps; ++i) taps[static_cast<std::size_t>(p) * kTaps + i] /= sum;
    }

    const std::uint64_t n_in = signal.samples.size();
    const std::uint64_t n_out = n_in * dst / src;
    SignalBuffer out;
    out.sample_rate_hz = target_hz;
    out.samples.resize(n_out);

    for (std::uint64_t j = 0; j < n_out; ++j) {
        // exact rational source position: j * src / dst
        const std::uint64_t num = j * src;
        const std::int64_t base = static_cast<std::int64_t>(num / dst);
        const double frac = static_cast<double>(num % dst) / static_cast<double>(dst);
        const double phase_pos = frac * kPhases;
        const int p0 = static_cast<int>(phase_pos);
        const double pf = phase_pos - p0;
        const double* w0 = taps.data() + static_cast<std::size_t>(p0) * kTaps;
        const double* w1 = taps.data() + static_cast<std::size_t>(p0 + 1) * kTaps;

        double acc = 0.0;
        for (int i = 0; i < kTaps; ++i) {
            const std::int64_t m = base + (i - kHalf + 1);
            if (m < 0 || m >= static_cast<std::int64_t>(n_in)) continue;
            acc += ((1.0 - pf) * w0[i] + pf * w1[i]) * signal.samples[static_cast<std::size_t>(m)];
        }
        out.samples[j] = acc;
    }
    return out;
}

std::vector<SignalBuffer> segment(const SignalBuffer& signal, double seg_len_s) {
    if (seg_len_s <= 0) throw ValidationError("segment: seg_len_s must be > 0");
    const std::size_t seg =
        static_cast<std::size_t>(std::llround(seg_len_s * signal.sample_rate_hz));
    if (seg == 0) throw ValidationError("segment: segment shorter than one sample");
    const std::size_t count = signal.samples.size() / seg;
    std::vector<SignalBuffer> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SignalBuffer s;
        s.sample_rate_hz = signal.sample_rate_hz;
        s.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(i * seg),
                         signal.samples.begin() + static_cast<std::ptrdiff_t>((i + 1) * seg));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace sonartex
