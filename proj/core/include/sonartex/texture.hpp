#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sonartex/manifest.hpp"
#include "sonartex/matrix.hpp"
#include "sonartex/signal.hpp"

namespace sonartex {

struct StaTSParams {
    int frame_len = 2048;
    int hop = 512;
    int n_bins = 128;
    double convergence_eps = 0.02; // fraction of the final entropy
};

/// Statistical texture score in [0, 5] plus everything needed to audit it:
/// score = 5 * p_rel * (1 - p_t * area_s / s_max).
struct StaTSResult {
    double score = 0.0;
    double p_rel = 0.0;   // final entropy / log2(n_bins)
    double p_t = 0.0;     // fraction of frames before the forward curve settles
    double area_s = 0.0;  // bit-seconds between forward and reverse curves
    double s_max = 0.0;   // duration * log2(n_bins)
    double h_final = 0.0; // bits
    std::vector<double> forward_curve;
    std::vector<double> reverse_curve;
    bool degenerate = false; // constant input; score pinned to 0
};

/// Structural texture score in [0, 5]: 5 * max(0, R(tau*)) where tau* is the
/// first significant autocorrelation peak past the lag-0 lobe.
struct StrTSResult {
    double score = 0.0;
    std::size_t tau_star = 0;
    double r_at_tau = 0.0;
    std::size_t tau_max = 0;
    std::vector<double> autocorr;
    bool no_zero_crossing = false; // R never crossed zero; argmax over all lags
};

struct SelfSimilarityMatrix {
    Matrix values; // pairwise cosine similarity of zero-meaned frames
    int frame_len = 2048;
    int hop = 512;
    int zero_frames = 0; // frames with no variance (rows zeroed, diagonal kept)
};

/// Shannon entropy (bits) of the frame histogrammed into n_bins equal-width
/// bins over [bin_lo, bin_hi]; out-of-range values are clamped into the edge
/// bins, and 0*log(0) counts as 0.
double frame_entropy(std::span<const double> frame, int n_bins, double bin_lo, double bin_hi);

/// Cumulative running means of per-frame entropies for the signal and its
/// time-reversed copy. Both passes share the global [min, max] bin edges.
std::pair<std::vector<double>, std::vector<double>>
entropy_curves(const SignalBuffer& signal, const StaTSParams& params);

StaTSResult stats_score(const SignalBuffer& signal, const StaTSParams& params = {});

/// Normalized autocorrelation of the zero-meaned signal for lags 0..tau_max
/// (biased normalization, R(0) = 1). Throws DegenerateSignalError on
/// zero-variance input.
std::vector<double> autocorr_normalized(const SignalBuffer& signal, std::size_t tau_max);

StrTSResult strts_score(const SignalBuffer& signal);

SelfSimilarityMatrix self_similarity(const SignalBuffer& signal, int frame_len = 2048,
                                     int hop = 512);

/// One scored file; `error` is set (and the scores left at 0) when the file
/// could not be read or scored.
struct FileScore {
    std::string dataset;
    std::string class_name;
    std::string path;
    double stats = 0.0;
    double strts = 0.0;
    std::string error;
};

struct GroupStats {
    std::string dataset;
    std::string class_name; // empty for whole-dataset rows
    std::size_t n = 0;
    double stats_mean = 0.0;
    double stats_std = 0.0; // sample std; 0 when n == 1
    double strts_mean = 0.0;
    double strts_std = 0.0;
};

struct ScoreReport {
    std::vector<FileScore> files;
    std::vector<GroupStats> per_class;
    std::vector<GroupStats> per_dataset;
};

struct BatchOptions {
    StaTSParams params;
    std::uint32_t analysis_rate_hz = 32000; // inputs at other rates get resampled
    int workers = 1;
};

/// Scores every manifest entry; per-file failures are recorded and the batch
/// continues. Output order follows the manifest regardless of worker count.
ScoreReport batch_score(const Manifest& manifest, const BatchOptions& options = {});

/// Recomputes per-class and per-dataset statistics from file rows (rows with
/// errors are excluded). Groups are ordered by first appearance.
void summarize_scores(ScoreReport& report);

} // namespace sonartex
