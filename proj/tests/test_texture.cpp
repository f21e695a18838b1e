#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sonartex/dsp.hpp"
#include "sonartex/errors.hpp"
#include "sonartex/rng.hpp"
#include "sonartex/texture.hpp"
#include "sonartex/wav.hpp"

using namespace sonartex;

namespace {

SignalBuffer gaussian_noise(std::size_t n, std::uint64_t seed, double amp = 0.3,
                            std::uint32_t rate = 32000) {
    Rng rng(seed);
    SignalBuffer s;
    s.sample_rate_hz = rate;
    s.samples.resize(n);
    for (auto& v : s.samples) v = amp * rng.gaussian();
    return s;
}

SignalBuffer writable(SignalBuffer s) {
    for (auto& v : s.samples) v = std::clamp(v, -0.999, 0.999);
    return s;
}

SignalBuffer sine(double freq_hz, std::size_t n, std::uint32_t rate, double amp = 1.0) {
    SignalBuffer s;
    s.sample_rate_hz = rate;
    s.samples.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        s.samples[t] = amp * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(t) / rate);
    return s;
}

} // namespace

// ---- frame_entropy ----

TEST_CASE("two alternating bin-center values give exactly 1 bit at M=2") {
    std::vector<double> frame;
    for (int i = 0; i < 64; ++i) frame.push_back(i % 2 == 0 ? 0.25 : 0.75);
    CHECK(frame_entropy(frame, 2, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a constant frame has zero entropy") {
    const std::vector<double> frame(256, 0.42);
    CHECK(frame_entropy(frame, 64, 0.0, 1.0) == 0.0);
}

TEST_CASE("uniform samples approach log2(M) bits") {
    Rng rng(1);
    std::vector<double> frame(4096);
    for (auto& x : frame) x = rng.uniform01();
    CHECK(frame_entropy(frame, 16, 0.0, 1.0) == doctest::Approx(4.0).epsilon(0.025));
}

TEST_CASE("frame_entropy equals the brute-force histogram oracle") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> frame(300 + static_cast<int>(rng.uniform01() * 1000));
        for (auto& x : frame) x = rng.gaussian();
        const double lo = -3.0, hi = 3.0;
        const int bins = 2 + static_cast<int>(rng.uniform01() * 62);
        CHECK(frame_entropy(frame, bins, lo, hi) ==
              doctest::Approx(oracle::entropy_brute(frame, bins, lo, hi)).epsilon(1e-9));
    }
}

TEST_CASE("frame_entropy is exactly invariant under sample permutation") {
    Rng rng(3);
    std::vector<double> frame(512);
    for (auto& x : frame) x = rng.gaussian();
    const double h = frame_entropy(frame, 32, -4.0, 4.0);
    std::sort(frame.begin(), frame.end());
    CHECK(frame_entropy(frame, 32, -4.0, 4.0) == h);
    std::reverse(frame.begin(), frame.end());
    CHECK(frame_entropy(frame, 32, -4.0, 4.0) == h);
}

TEST_CASE("frame_entropy rejects bad input") {
    CHECK_THROWS_AS(frame_entropy(std::vector<double>{}, 8, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(frame_entropy(std::vector<double>{1.0}, 8, 1.0, 1.0), ValidationError);
}

// ---- entropy curves ----

TEST_CASE("forward and reverse curves have equal length") {
    const SignalBuffer s = gaussian_noise(50000, 4);
    StaTSParams p;
    const auto [fwd, rev] = entropy_curves(s, p);
    CHECK(fwd.size() == rev.size());
    CHECK(fwd.size() == frame_count(50000, 2048, 512));
}

TEST_CASE("palindromic signal with aligned framing gives identical curves") {
    StaTSParams p;
    p.frame_len = 256;
    p.hop = 128;
    // (n - frame_len) % hop == 0
    const std::size_t n = 256 + 128 * 77;
    Rng rng(5);
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double v = rng.gaussian();
        s.samples[i] = v;
        s.samples[n - 1 - i] = v;
    }
    const auto [fwd, rev] = entropy_curves(s, p);
    for (std::size_t i = 0; i < fwd.size(); ++i)
        REQUIRE(fwd[i] == doctest::Approx(rev[i]).epsilon(1e-9));
}

TEST_CASE("iid noise: forward and reverse converge to the same level") {
    StaTSParams p;
    const std::size_t n = 2048 + 99 * 512; // 100 frames
    const SignalBuffer s = gaussian_noise(n, 6);
    const auto [fwd, rev] = entropy_curves(s, p);
    REQUIRE(fwd.size() == 100);
    CHECK(std::abs(fwd[99] - rev[99]) < 0.1);
}

TEST_CASE("entropy curves never exceed log2(M)") {
    StaTSParams p;
    for (std::uint64_t seed : {7, 8, 9}) {
        const SignalBuffer s = gaussian_noise(30000, seed);
        const auto [fwd, rev] = entropy_curves(s, p);
        const double bound = std::log2(p.n_bins);
        for (double v : fwd) REQUIRE(v <= bound);
        for (double v : rev) REQUIRE(v <= bound);
    }
}

// ---- stats_score ----

TEST_CASE("constant signal scores 0 with the degenerate flag, not an error") {
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.assign(8192, 0.7);
    const StaTSResult r = stats_score(s);
    CHECK(r.score == 0.0);
    CHECK(r.p_rel == 0.0);
    CHECK(r.degenerate);
}

TEST_CASE("5 s of Gaussian white noise scores at least 4.0") {
    const SignalBuffer s = gaussian_noise(160000, 42);
    const StaTSResult r = stats_score(s);
    CHECK(r.score >= 4.0);
    CHECK(r.score <= 5.0);
}

TEST_CASE("score decomposition identity holds to 1e-12") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const StaTSResult r = stats_score(gaussian_noise(100000, seed));
        CHECK(r.score ==
              doctest::Approx(5.0 * r.p_rel * (1.0 - r.p_t * r.area_s / r.s_max)).epsilon(1e-12));
        CHECK(r.h_final <= std::log2(128.0));
        CHECK(r.h_final >= 0.0);
    }
}

TEST_CASE("stats_score is scale-invariant (global bin edges track the data)") {
    const SignalBuffer base = gaussian_noise(60000, 10, 0.1);
    const StaTSResult r0 = stats_score(base);
    for (double a : {2.0, 0.25, 7.3, -3.0}) {
        SignalBuffer scaled = base;
        for (auto& v : scaled.samples) v *= a;
        const StaTSResult r = stats_score(scaled);
        REQUIRE(r.score == doctest::Approx(r0.score).epsilon(1e-9));
    }
}

TEST_CASE("swapping forward and reverse curves leaves the area unchanged") {
    // the area uses |forward - reverse|, so recomputing with swapped curves
    // must give the identical trapezoid sum
    const SignalBuffer s = gaussian_noise(60000, 11);
    const StaTSResult r = stats_score(s);
    const double dt = 512.0 / 32000.0;
    double swapped = 0.0;
    for (std::size_t i = 0; i + 1 < r.reverse_curve.size(); ++i) {
        const double a = std::abs(r.reverse_curve[i] - r.forward_curve[i]);
        const double b = std::abs(r.reverse_curve[i + 1] - r.forward_curve[i + 1]);
        swapped += 0.5 * (a + b) * dt;
    }
    CHECK(swapped == r.area_s);
}

TEST_CASE("stats_score rejects too-short signals") {
    SignalBuffer s = gaussian_noise(4095, 12);
    CHECK_THROWS_AS(stats_score(s), ValidationError);
}

// ---- autocorrelation ----

TEST_CASE("R(0) is exactly 1 for any non-constant signal") {
    for (std::uint64_t seed : {13, 14}) {
        const auto r = autocorr_normalized(gaussian_noise(10000, seed), 2500);
        CHECK(r[0] == 1.0);
        CHECK(r.size() == 2501);
    }
}

TEST_CASE("a sine with integer period has R(P) near 1") {
    // period 80 samples at 32 kHz -> 400 Hz
    const SignalBuffer s = sine(400.0, 64000, 32000);
    const auto r = autocorr_normalized(s, 16000);
    CHECK(r[80] > 0.99);
}

TEST_CASE("white-noise lags stay under the 4/sqrt(N) noise floor") {
    // Monte-Carlo bound: individual lags are ~N(0, 1/N), so 4/sqrt(N) holds
    // for a moderate number of lags (checked over several seeds)
    const std::size_t n = 32768;
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t seed : {15, 16, 17, 18}) {
        const SignalBuffer s = gaussian_noise(n, seed);
        const auto r = autocorr_normalized(s, 256);
        for (std::size_t tau = 1; tau < r.size(); ++tau) REQUIRE(std::abs(r[tau]) < bound);
    }
}

TEST_CASE("fft autocorrelation matches the O(N^2) oracle") {
    Rng rng(16);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 512 + static_cast<std::size_t>(rng.uniform01() * 1536);
        SignalBuffer s;
        s.sample_rate_hz = 32000;
        s.samples.resize(n);
        for (auto& v : s.samples) v = rng.gaussian() + 0.3;
        const std::size_t tau_max = n / 4;
        const auto fast = autocorr_normalized(s, tau_max);
        const auto brute = oracle::autocorr_brute(s.samples, tau_max);
        for (std::size_t tau = 0; tau <= tau_max; ++tau)
            REQUIRE(std::abs(fast[tau] - brute[tau]) < 1e-6);
    }
}

TEST_CASE("zero-variance input raises DegenerateSignalError") {
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.assign(4096, 1.25);
    CHECK_THROWS_AS(autocorr_normalized(s, 1024), DegenerateSignalError);
    CHECK_THROWS_AS(strts_score(s), DegenerateSignalError);
}

// ---- strts_score ----

TEST_CASE("pure 440 Hz sine scores 5.00 within 0.10") {
    const SignalBuffer s = sine(440.0, 160000, 32000);
    const StrTSResult r = strts_score(s);
    CHECK(r.score == doctest::Approx(5.0).epsilon(0.02));
    CHECK_FALSE(r.no_zero_crossing);
    CHECK(r.tau_max == 40000);
}

TEST_CASE("white noise scores at most 0.3") {
    const StrTSResult r = strts_score(gaussian_noise(160000, 17));
    CHECK(r.score <= 0.3);
    CHECK(r.score >= 0.0);
}

TEST_CASE("square wave: tau* at the period, score >= 4.9") {
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.resize(50000); // 500 periods of 100 samples
    for (std::size_t t = 0; t < s.samples.size(); ++t)
        s.samples[t] = (t % 100) < 50 ? 1.0 : -1.0;
    const StrTSResult r = strts_score(s);
    CHECK(r.tau_star >= 99);
    CHECK(r.tau_star <= 101);
    CHECK(r.score >= 4.9);
}

TEST_CASE("strts score identity and range") {
    for (std::uint64_t seed : {18, 19}) {
        const StrTSResult r = strts_score(gaussian_noise(50000, seed));
        CHECK(r.score == 5.0 * std::max(0.0, r.r_at_tau));
        CHECK(r.tau_star >= 1);
        CHECK(r.tau_star <= r.tau_max);
        CHECK(r.score >= 0.0);
        CHECK(r.score <= 5.0);
    }
}

TEST_CASE("strts is exactly scale-invariant for power-of-two factors") {
    const SignalBuffer base = gaussian_noise(40000, 20);
    const StrTSResult r0 = strts_score(base);
    for (double a : {2.0, 0.125, -4.0}) {
        SignalBuffer scaled = base;
        for (auto& v : scaled.samples) v *= a;
        const StrTSResult r = strts_score(scaled);
        REQUIRE(r.score == r0.score);
        REQUIRE(r.tau_star == r0.tau_star);
    }
    // arbitrary factors hold to rounding
    SignalBuffer scaled = base;
    for (auto& v : scaled.samples) v *= 1.7;
    CHECK(strts_score(scaled).score == doctest::Approx(r0.score).epsilon(1e-9));
}

TEST_CASE("strts is offset-invariant within 1e-9") {
    const SignalBuffer base = sine(440.0, 64000, 32000, 0.5);
    const StrTSResult r0 = strts_score(base);
    SignalBuffer shifted = base;
    for (auto& v : shifted.samples) v += 3.25;
    const StrTSResult r = strts_score(shifted);
    CHECK(r.score == doctest::Approx(r0.score).epsilon(1e-9));
    CHECK(r.tau_star == r0.tau_star);
}

TEST_CASE("monotone ramp never crosses zero and sets the diagnostic") {
    SignalBuffer s;
    s.sample_rate_hz = 32000;
    s.samples.resize(8192);
    std::iota(s.samples.begin(), s.samples.end(), 0.0);
    const StrTSResult r = strts_score(s);
    CHECK(r.no_zero_crossing);
    CHECK(r.score >= 0.0);
}

// ---- self-similarity ----

TEST_CASE("SSM is symmetric with a unit diagonal") {
    const SelfSimilarityMatrix m = self_similarity(gaussian_noise(40000, 21), 2048, 512);
    REQUIRE(m.values.rows == m.values.cols);
    for (std::size_t i = 0; i < m.values.rows; ++i) {
        REQUIRE(m.values(i, i) == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t j = 0; j < i; ++j) {
            REQUIRE(m.values(i, j) == m.values(j, i));
            REQUIRE(m.values(i, j) >= -1.0 - 1e-12);
            REQUIRE(m.values(i, j) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("periodic signal shows stripes at the period offset") {
    // period = 2 * hop, so frames two apart coincide
    const int hop = 256;
    const SignalBuffer s = sine(32000.0 / (2 * hop), 40960, 32000);
    const SelfSimilarityMatrix m = self_similarity(s, 512, hop);
    for (std::size_t i = 0; i + 2 < m.values.rows; ++i) REQUIRE(m.values(i, i + 2) > 0.9);
}

TEST_CASE("white-noise SSM off-diagonals are small on average") {
    const SelfSimilarityMatrix m = self_similarity(gaussian_noise(40000, 22), 2048, 512);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.values.rows; ++i)
        for (std::size_t j = 0; j < m.values.cols; ++j) {
            if (i == j) continue;
            acc += std::abs(m.values(i, j));
            ++count;
        }
    CHECK(acc / static_cast<double>(count) < 0.1);
}

TEST_CASE("all-zero frames zero their rows but keep the diagonal") {
    SignalBuffer s = gaussian_noise(6144, 23);
    std::fill(s.samples.begin() + 2048, s.samples.begin() + 4096, 0.0);
    const SelfSimilarityMatrix m = self_similarity(s, 2048, 2048);
    REQUIRE(m.values.rows == 3);
    CHECK(m.zero_frames == 1);
    CHECK(m.values(1, 1) == 1.0);
    CHECK(m.values(0, 1) == 0.0);
    CHECK(m.values(1, 2) == 0.0);
}

// ---- batch scoring ----

TEST_CASE("batch scoring: single file, error rows, and exact two-file mean") {
    oracle::TmpDir tmp("batch");
    const SignalBuffer a = writable(gaussian_noise(80000, 24));
    const SignalBuffer b = sine(500.0, 80000, 32000, 0.8);
    write_wav(a, tmp.path / "a.wav");
    write_wav(b, tmp.path / "b.wav");

    Manifest manifest;
    manifest.base_dir = tmp.path;
    manifest.rows.push_back({"a.wav", "c1", 1, "demo", 2.5, 32000});

    BatchOptions options;
    SUBCASE("single file: std is 0 by convention") {
        const ScoreReport r = batch_score(manifest, options);
        REQUIRE(r.files.size() == 1);
        REQUIRE(r.per_dataset.size() == 1);
        CHECK(r.per_dataset[0].n == 1);
        CHECK(r.per_dataset[0].stats_std == 0.0);
        CHECK(r.per_dataset[0].strts_std == 0.0);
        CHECK(r.per_dataset[0].stats_mean == r.files[0].stats);
    }

    SUBCASE("two files: mean is the exact average") {
        manifest.rows.push_back({"b.wav", "c2", 2, "demo", 2.5, 32000});
        const ScoreReport r = batch_score(manifest, options);
        REQUIRE(r.files.size() == 2);
        CHECK(r.per_dataset[0].stats_mean ==
              doctest::Approx((r.files[0].stats + r.files[1].stats) / 2.0).epsilon(1e-12));
        CHECK(r.per_class.size() == 2);
    }

    SUBCASE("unreadable file is recorded and the batch continues") {
        manifest.rows.push_back({"missing.wav", "c2", 3, "demo", 2.5, 32000});
        const ScoreReport r = batch_score(manifest, options);
        REQUIRE(r.files.size() == 2);
        CHECK(r.files[1].error != "");
        CHECK(r.per_dataset[0].n == 1); // error rows excluded from stats
    }

    SUBCASE("non-32k inputs are resampled before scoring") {
        SignalBuffer hi = sine(500.0, 120000, 48000, 0.8);
        write_wav(hi, tmp.path / "hi.wav");
        Manifest m2;
        m2.base_dir = tmp.path;
        m2.rows.push_back({"hi.wav", "c", 1, "demo", 2.5, 48000});
        const ScoreReport r = batch_score(m2, options);
        REQUIRE(r.files[0].error == "");
        CHECK(r.files[0].strts > 4.8); // still a clean sine after resampling
    }
}

TEST_CASE("batch scoring order is independent of worker count") {
    oracle::TmpDir tmp("batch_par");
    Manifest manifest;
    manifest.base_dir = tmp.path;
    for (int i = 0; i < 12; ++i) {
        const auto name = "f" + std::to_string(i) + ".wav";
        write_wav(writable(gaussian_noise(40000, 100 + static_cast<std::uint64_t>(i))), tmp.path / name);
        manifest.rows.push_back({name, "c" + std::to_string(i % 3), 1, "demo", 1.25, 32000});
    }
    BatchOptions serial;
    serial.workers = 1;
    BatchOptions parallel;
    parallel.workers = 8;
    const ScoreReport a = batch_score(manifest, serial);
    const ScoreReport b = batch_score(manifest, parallel);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i].path == b.files[i].path);
        CHECK(a.files[i].stats == b.files[i].stats);
        CHECK(a.files[i].strts == b.files[i].strts);
    }
}
