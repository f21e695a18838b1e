#include "sonartex/texture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "sonartex/dsp.hpp"
#include "sonartex/errors.hpp"
#include "sonartex/fft.hpp"
#include "sonartex/parallel.hpp"
#include "sonartex/wav.hpp"

namespace sonartex {

namespace {

void validate_params(const StaTSParams& p) {
    if (p.frame_len < 2) throw ValidationError("frame_len must be >= 2");
    if (p.hop < 1 || p.hop > p.frame_len) throw ValidationError("hop must be in [1, frame_len]");
    if (p.n_bins < 2) throw ValidationError("n_bins must be >= 2");
    if (p.frame_len < 2 * p.n_bins)
        throw ValidationError("frame_len must be >= 2 * n_bins to populate the histogram");
    if (p.convergence_eps <= 0) throw ValidationError("convergence_eps must be > 0");
}

std::pair<double, double> value_range(const std::vector<double>& v) {
    double lo = v[0];
    double hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {lo, hi};
}

std::vector<double> cumulative_mean_entropies(const std::vector<double>& samples,
                                              const StaTSParams& p, double lo, double hi) {
    const std::size_t frames =
        frame_count(samples.size(), static_cast<std::size_t>(p.frame_len),
                    static_cast<std::size_t>(p.hop));
    std::vector<double> curve(frames);
    double acc = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
        const std::span<const double> frame(samples.data() + f * p.hop,
                                            static_cast<std::size_t>(p.frame_len));
        acc += frame_entropy(frame, p.n_bins, lo, hi);
        curve[f] = acc / static_cast<double>(f + 1);
    }
    return curve;
}

} // namespace

double frame_entropy(std::span<const double> frame, int n_bins, double bin_lo, double bin_hi) {
    if (frame.empty()) throw ValidationError("frame_entropy: empty frame");
    if (!(bin_lo < bin_hi)) throw ValidationError("frame_entropy: bin_lo must be < bin_hi");
    if (n_bins < 1) throw ValidationError("frame_entropy: n_bins must be >= 1");

    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    const double inv_width = n_bins / (bin_hi - bin_lo);
    for (double x : frame) {
        // clamp in the double domain so extreme values cannot overflow the cast
        const double pos = (x - bin_lo) * inv_width;
        const int idx = pos <= 0.0 ? 0
                        : pos >= static_cast<double>(n_bins) ? n_bins - 1
                                                             : static_cast<int>(pos);
        ++counts[static_cast<std::size_t>(idx)];
    }
    const double n = static_cast<double>(frame.size());
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double pk = static_cast<double>(c) / n;
        h -= pk * std::log2(pk);
    }
    return h;
}

std::pair<std::vector<double>, std::vector<double>>
entropy_curves(const SignalBuffer& signal, const StaTSParams& params) {
    validate_params(params);
    if (signal.size() < static_cast<std::size_t>(params.frame_len))
        throw ValidationError("entropy_curves: signal shorter than one frame");

    auto [lo, hi] = value_range(signal.samples);
    if (!(lo < hi)) {
        // constant signal: every frame occupies a single bin, entropy 0
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<double> reversed(signal.samples.rbegin(), signal.samples.rend());
    auto forward = cumulative_mean_entropies(signal.samples, params, lo, hi);
    auto reverse = cumulative_mean_entropies(reversed, params, lo, hi);
    return {std::move(forward), std::move(reverse)};
}

StaTSResult stats_score(const SignalBuffer& signal, const StaTSParams& params) {
    validate_params(params);
    if (signal.sample_rate_hz == 0) throw ValidationError("stats_score: zero sample rate");
    if (signal.size() < 2 * static_cast<std::size_t>(params.frame_len))
        throw ValidationError("stats_score: need at least two frames of signal");

    StaTSResult r;
    auto [lo, hi] = value_range(signal.samples);
    r.degenerate = !(lo < hi);

    auto curves = entropy_curves(signal, params);
    r.forward_curve = std::move(curves.first);
    r.reverse_curve = std::move(curves.second);
    const std::size_t frames = r.forward_curve.size();

    const double log2_m = std::log2(static_cast<double>(params.n_bins));
    const double t_obs = signal.duration_s();
    const double dt = static_cast<double>(params.hop) / signal.sample_rate_hz;

    r.s_max = t_obs * log2_m;
    r.h_final = r.forward_curve.back();
    r.p_rel = r.h_final / log2_m;

    // trapezoidal area between the curves; frame i sits at time i * hop / fs
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < frames; ++i) {
        const double a = std::abs(r.forward_curve[i] - r.reverse_curve[i]);
        const double b = std::abs(r.forward_curve[i + 1] - r.reverse_curve[i + 1]);
        area += 0.5 * (a + b) * dt;
    }
    r.area_s = area;

    // first frame index after which the forward curve stays inside the
    // convergence band around its final value
    const double band = params.convergence_eps * std::abs(r.h_final);
    std::size_t settle = frames - 1; // the last point is the target itself
    while (settle > 0 && std::abs(r.forward_curve[settle - 1] - r.h_final) <= band) --settle;
    r.p_t = static_cast<double>(settle) / static_cast<double>(frames);

    if (r.degenerate) {
        r.score = 0.0;
        return r;
    }
    r.score = std::clamp(5.0 * r.p_rel * (1.0 - r.p_t * r.area_s / r.s_max), 0.0, 5.0);
    return r;
}

std::vector<double> autocorr_normalized(const SignalBuffer& signal, std::size_t tau_max) {
    const std::size_t n = signal.size();
    if (tau_max < 1 || tau_max >= n)
        throw ValidationError("autocorr_normalized: need 1 <= tau_max < signal length");

    const double mean = std::accumulate(signal.samples.begin(), signal.samples.end(), 0.0) /
                        static_cast<double>(n);
    const std::size_t padded = next_pow2(n + tau_max + 1);
    std::vector<std::complex<double>> buf(padded);
    for (std::size_t i = 0; i < n; ++i) buf[i] = {signal.samples[i] - mean, 0.0};

    fft_pow2(buf, false);
    for (auto& v : buf) v = {std::norm(v), 0.0};
    fft_pow2(buf, true);

    const double r0 = buf[0].real();
    if (!(r0 > 0.0))
        throw DegenerateSignalError("autocorr_normalized: zero-variance signal");

    std::vector<double> r(tau_max + 1);
    for (std::size_t tau = 0; tau <= tau_max; ++tau) r[tau] = buf[tau].real() / r0;
    r[0] = 1.0;
    return r;
}

StrTSResult strts_score(const SignalBuffer& signal) {
    const std::size_t n = signal.size();
    if (n < 8) throw ValidationError("strts_score: signal too short");

    StrTSResult result;
    result.tau_max = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(n)));
    result.tau_max = std::clamp<std::size_t>(result.tau_max, 1, n - 1);
    result.autocorr = autocorr_normalized(signal, result.tau_max);
    const auto& r = result.autocorr;

    // skip the lag-0 main lobe: the peak search starts at the first zero
    // crossing of R
    std::size_t start = 0;
    for (std::size_t tau = 1; tau <= result.tau_max; ++tau) {
        if (r[tau] <= 0.0) {
            start = tau;
            break;
        }
    }
    if (start == 0) {
        result.no_zero_crossing = true;
        start = 1;
    }

    std::size_t best = start;
    for (std::size_t tau = start; tau <= result.tau_max; ++tau) {
        if (r[tau] > r[best]) best = tau;
    }
    result.tau_star = best;
    result.r_at_tau = r[best];
    result.score = 5.0 * std::max(0.0, result.r_at_tau);
    return result;
}

SelfSimilarityMatrix self_similarity(const SignalBuffer& signal, int frame_len, int hop) {
    if (frame_len < 2) throw ValidationError("self_similarity: frame_len must be >= 2");
    if (hop < 1) throw ValidationError("self_similarity: hop must be >= 1");
    const std::size_t frames = frame_count(signal.size(), static_cast<std::size_t>(frame_len),
                                           static_cast<std::size_t>(hop));
    if (frames == 0) throw ValidationError("self_similarity: signal shorter than one frame");

    // zero-mean each frame once, then cache norms
    Matrix centered(frames, static_cast<std::size_t>(frame_len));
    std::vector<double> norms(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        const double* src = signal.samples.data() + f * static_cast<std::size_t>(hop);
        double mean = 0.0;
        for (int i = 0; i < frame_len; ++i) mean += src[i];
        mean /= frame_len;
        double ss = 0.0;
        for (int i = 0; i < frame_len; ++i) {
            const double v = src[i] - mean;
            centered(f, static_cast<std::size_t>(i)) = v;
            ss += v * v;
        }
        norms[f] = std::sqrt(ss);
    }

    SelfSimilarityMatrix out;
    out.frame_len = frame_len;
    out.hop = hop;
    out.values = Matrix(frames, frames);
    for (std::size_t i = 0; i < frames; ++i) {
        out.values(i, i) = 1.0;
        if (norms[i] == 0.0) ++out.zero_frames;
        for (std::size_t j = i + 1; j < frames; ++j) {
            double sim = 0.0;
            if (norms[i] > 0.0 && norms[j] > 0.0) {
                const double* a = centered.row(i);
                const double* b = centered.row(j);
                double dot = 0.0;
                for (int k = 0; k < frame_len; ++k) dot += a[k] * b[k];
                sim = dot / (norms[i] * norms[j]);
            }
            out.values(i, j) = sim;
            out.values(j, i) = sim;
        }
    }
    return out;
}

ScoreReport batch_score(const Manifest& manifest, const BatchOptions& options) {
    validate_params(options.params);
    ScoreReport report;
    report.files.resize(manifest.rows.size());

    parallel_for(manifest.rows.size(), options.workers, [&](std::size_t i) {
        const auto& row = manifest.rows[i];
        FileScore& f = report.files[i];
        f.dataset = row.kind;
        f.class_name = row.class_name;
        f.path = row.path;
        try {
            SignalBuffer signal = read_wav(manifest.resolve(row));
            if (signal.sample_rate_hz != options.analysis_rate_hz)
                signal = resample(signal, options.analysis_rate_hz);
            f.stats = stats_score(signal, options.params).score;
            f.strts = strts_score(signal).score;
        } catch (const std::exception& e) {
            f.error = e.what();
        }
    });

    summarize_scores(report);
    return report;
}

void summarize_scores(ScoreReport& report) {
    struct Acc {
        std::size_t n = 0;
        double stats_sum = 0, stats_sq = 0, strts_sum = 0, strts_sq = 0;
        void add(const FileScore& f) {
            ++n;
            stats_sum += f.stats;
            stats_sq += f.stats * f.stats;
            strts_sum += f.strts;
            strts_sq += f.strts * f.strts;
        }
        GroupStats finish(std::string dataset, std::string class_name) const {
            GroupStats g;
            g.dataset = std::move(dataset);
            g.class_name = std::move(class_name);
            g.n = n;
            if (n > 0) {
                g.stats_mean = stats_sum / static_cast<double>(n);
                g.strts_mean = strts_sum / static_cast<double>(n);
            }
            if (n > 1) {
                const double dn = static_cast<double>(n);
                g.stats_std = std::sqrt(
                    std::max(0.0, (stats_sq - dn * g.stats_mean * g.stats_mean) / (dn - 1.0)));
                g.strts_std = std::sqrt(
                    std::max(0.0, (strts_sq - dn * g.strts_mean * g.strts_mean) / (dn - 1.0)));
            }
            return g;
        }
    };

    // ordered by first appearance, keyed by dataset then dataset/class
    std::vector<std::pair<std::string, Acc>> by_dataset;
    std::vector<std::pair<std::pair<std::string, std::string>, Acc>> by_class;
    for (const auto& f : report.files) {
        if (!f.error.empty()) continue;
        auto d = std::find_if(by_dataset.begin(), by_dataset.end(),
                              [&](const auto& p) { return p.first == f.dataset; });
        if (d == by_dataset.end()) {
            by_dataset.emplace_back(f.dataset, Acc{});
            d = std::prev(by_dataset.end());
        }
        d->second.add(f);
        const std::pair<std::string, std::string> key{f.dataset, f.class_name};
        auto c = std::find_if(by_class.begin(), by_class.end(),
                              [&](const auto& p) { return p.first == key; });
        if (c == by_class.end()) {
            by_class.emplace_back(key, Acc{});
            c = std::prev(by_class.end());
        }
        c->second.add(f);
    }

    report.per_class.clear();
    for (const auto& [key, acc] : by_class)
        report.per_class.push_back(acc.finish(key.first, key.second));
    report.per_dataset.clear();
    for (const auto& [key, acc] : by_dataset) report.per_dataset.push_back(acc.finish(key, ""));
}

} // namespace sonartex
