#pragma once

#include <cstdint>
#include <vector>

#include "sonartex/matrix.hpp"
#include "sonartex/signal.hpp"

namespace sonartex {

struct SpectrogramConfig {
    int window_len = 1024; // Hann window
    int hop = 320;
    int n_mels = 1024;
    std::uint32_t sample_rate_hz = 32000;
    double log_floor = 1e-10;
};

struct MelSpectrogram {
    Matrix values; // frames x n_mels, natural-log power
    std::vector<double> frame_times_s;
};

struct MelFilterbankResult {
    Matrix weights;        // n_mels x (window_len/2 + 1)
    int empty_filters = 0; // triangles narrower than one FFT bin (reported, not an error)
};

/// Number of full non-centered frames: floor((n - window) / hop) + 1.
std::size_t frame_count(std::size_t n_samples, std::size_t window_len, std::size_t hop);

/// Magnitude spectra of Hann-windowed non-centered frames,
/// frames x (window_len/2 + 1).
Matrix stft_magnitude(const SignalBuffer& signal, const SpectrogramConfig& cfg);

/// HTK mel scale: 2595 * log10(1 + hz/700).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with centers equally spaced on the mel scale from
/// 0 Hz to Nyquist.
MelFilterbankResult mel_filterbank(const SpectrogramConfig& cfg);

/// log(max(filterbank * power_spectrum, log_floor)) per frame.
MelSpectrogram log_mel(const SignalBuffer& signal, const SpectrogramConfig& cfg);

/// Band-limited rate conversion with a Kaiser-windowed sinc polyphase filter
/// (64 taps per phase, beta = 8.6). Identity when rates already match.
SignalBuffer resample(const SignalBuffer& signal, std::uint32_t target_hz);

/// Non-overlapping segments of exactly seg_len_s; the trailing remainder is
/// dropped.
std::vector<SignalBuffer> segment(const SignalBuffer& signal, double seg_len_s);

} // namespace sonartex
