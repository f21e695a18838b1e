#include "sonartex/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>

#include "sonartex/errors.hpp"
#include "sonartex/fft.hpp"
#include "sonartex/parallel.hpp"

namespace sonartex {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kPeakTarget = 0.95; // post-sum normalization headroom

[[noreturn]] void config_error(const ClassConfig& cfg, const std::string& what) {
    throw ValidationError("class '" + cfg.class_name + "': " + what);
}

void check_frequencies(const ClassConfig& cfg, std::size_t expected, std::uint32_t rate) {
    if (cfg.frequencies_hz.size() != expected)
        config_error(cfg, "frequencies_hz needs exactly " + std::to_string(expected) +
                              " entries, got " + std::to_string(cfg.frequencies_hz.size()));
    for (double f : cfg.frequencies_hz) {
        if (!(f > 0))
            config_error(cfg, "frequencies_hz entries must be positive");
        if (f >= rate / 2.0)
            config_error(cfg, "frequency " + std::to_string(f) + " Hz is at or above Nyquist (" +
                                  std::to_string(rate / 2.0) + " Hz)");
    }
}

std::size_t clip_samples(const DatasetSpec& spec) {
    return static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
}

void add_tone(std::vector<double>& acc, const std::vector<double>& envelope, double freq_hz,
              double phase, std::uint32_t rate) {
    const double w = kTwoPi * freq_hz / rate;
    for (std::size_t t = 0; t < acc.size(); ++t)
        acc[t] += envelope[t] * std::sin(w * static_cast<double>(t) + phase);
}

void peak_normalize(std::vector<double>& samples) {
    double peak = 0.0;
    for (double s : samples) peak = std::max(peak, std::abs(s));
    if (peak <= 0.0) return;
    const double scale = kPeakTarget / peak;
    for (double& s : samples) s *= scale;
}

double envelope_shape_value(EnvelopeShape shape, double u) {
    switch (shape) {
    case EnvelopeShape::triangular:
        return 1.0 - std::abs(2.0 * u - 1.0);
    case EnvelopeShape::exp_decay:
        return std::exp(-3.0 * u);
    case EnvelopeShape::plateau: {
        constexpr double taper = 0.1;
        if (u < taper) return 0.5 - 0.5 * std::cos(kPi * u / taper);
        if (u > 1.0 - taper) return 0.5 - 0.5 * std::cos(kPi * (1.0 - u) / taper);
        return 1.0;
    }
    case EnvelopeShape::ramp:
        return u;
    }
    return 0.0;
}

} // namespace

std::string to_string(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::statistical: return "statistical";
    case DatasetKind::structural: return "structural";
    case DatasetKind::mixed: return "mixed";
    }
    return "?";
}

std::string to_string(AmplitudeTransition transition) {
    switch (transition) {
    case AmplitudeTransition::none: return "none";
    case AmplitudeTransition::k_to_rayleigh: return "k_to_rayleigh";
    case AmplitudeTransition::rayleigh_to_k: return "rayleigh_to_k";
    }
    return "?";
}

std::string to_string(ModulationSpeed speed) {
    return speed == ModulationSpeed::slow ? "slow" : "fast";
}

std::string to_string(EnvelopeShape shape) {
    switch (shape) {
    case EnvelopeShape::triangular: return "triangular";
    case EnvelopeShape::exp_decay: return "exp_decay";
    case EnvelopeShape::plateau: return "plateau";
    case EnvelopeShape::ramp: return "ramp";
    }
    return "?";
}

std::pair<double, double> modulation_rate_range(ModulationSpeed speed) {
    // the [1, 3] Hz band split into a slow and a fast partition
    return speed == ModulationSpeed::slow ? std::pair{1.0, 1.7} : std::pair{2.3, 3.0};
}

void validate(const DatasetSpec& spec) {
    if (spec.sample_rate_hz == 0) throw ValidationError("sample_rate_hz must be positive");
    if (!(spec.duration_s > 0)) throw ValidationError("duration_s must be positive");
    if (spec.samples_per_class < 1) throw ValidationError("samples_per_class must be >= 1");
    if (spec.classes.empty()) throw ValidationError("at least one class is required");
    if (clip_samples(spec) < 16) throw ValidationError("clip too short to synthesize");

    for (const auto& cfg : spec.classes) {
        if (cfg.class_name.empty()) throw ValidationError("class_name must not be empty");
        const auto dup = std::count_if(spec.classes.begin(), spec.classes.end(),
                                       [&](const auto& c) { return c.class_name == cfg.class_name; });
        if (dup != 1) config_error(cfg, "duplicate class_name");
        if (!(cfg.envelope_segment_s > 0)) config_error(cfg, "envelope_segment_s must be > 0");
        validate(cfg.noise);
        switch (spec.kind) {
        case DatasetKind::statistical:
            check_frequencies(cfg, 3, spec.sample_rate_hz);
            validate(cfg.amplitude_model);
            break;
        case DatasetKind::structural:
            validate(cfg.harmonic, spec.sample_rate_hz);
            break;
        case DatasetKind::mixed:
            check_frequencies(cfg, 4, spec.sample_rate_hz);
            validate(cfg.amplitude_model);
            if (cfg.amplitude_transition == AmplitudeTransition::none)
                config_error(cfg, "mixed classes need amplitude_transition k_to_rayleigh or "
                                  "rayleigh_to_k");
            if (cfg.modulation) validate(*cfg.modulation);
            if (cfg.blend) validate(*cfg.blend);
            break;
        }
    }
}

DatasetSpec default_spec(DatasetKind kind) {
    DatasetSpec spec;
    spec.kind = kind;
    spec.samples_per_class = 10000;
    spec.duration_s = 5.0;
    spec.sample_rate_hz = 32000;
    spec.master_seed = 1;

    auto make_class = [&](int i) {
        ClassConfig cfg;
        cfg.class_name = "Vessel" + std::to_string(i + 1);
        // noise RMS spread across the [0.006, 0.01] band, one level per class
        cfg.noise.level = 0.006 + 0.004 * i / 3.0;
        return cfg;
    };

    switch (kind) {
    case DatasetKind::statistical: {
        // tone pool picked so that no class triple aligns well at lags where
        // the segment envelope is still correlated (that would read as
        // periodic structure); adjacent classes share two of their three tones
        static const double pool[6] = {2188, 3732, 4930, 6671, 9205, 10329};
        for (int i = 0; i < 4; ++i) {
            ClassConfig cfg = make_class(i);
            cfg.frequencies_hz = {pool[i], pool[i + 1], pool[i + 2]};
            cfg.envelope_segment_s = 0.01;
            spec.classes.push_back(std::move(cfg));
        }
        break;
    }
    case DatasetKind::structural: {
        static const double base[4] = {2200, 3000, 4200, 5100};
        static const EnvelopeShape shapes[4] = {EnvelopeShape::triangular,
                                                EnvelopeShape::exp_decay,
                                                EnvelopeShape::plateau, EnvelopeShape::ramp};
        for (int i = 0; i < 4; ++i) {
            ClassConfig cfg = make_class(i);
            cfg.harmonic.base_hz = base[i];
            cfg.harmonic.jitter_hz = 50.0;
            cfg.harmonic.n_harmonics = 3;
            cfg.envelope_shape = shapes[i];
            cfg.noise = NoiseModel{.level = 0.005,
                                   .impulse_rate_per_s = 0.0,
                                   .impulse_amp_range = {0.0, 0.0},
                                   .spectral_slope = 0.0};
            spec.classes.push_back(std::move(cfg));
        }
        break;
    }
    case DatasetKind::mixed: {
        struct Row {
            std::array<double, 4> freqs;
            AmplitudeTransition transition;
            ModulationSpeed speed;
        };
        static const Row rows[4] = {
            {{2200, 3500, 5000, 6500}, AmplitudeTransition::k_to_rayleigh, ModulationSpeed::slow},
            {{3000, 4500, 6000, 7000}, AmplitudeTransition::rayleigh_to_k, ModulationSpeed::slow},
            {{9000, 10500, 12000, 13000}, AmplitudeTransition::rayleigh_to_k,
             ModulationSpeed::fast},
            {{10000, 11500, 13000, 14000}, AmplitudeTransition::k_to_rayleigh,
             ModulationSpeed::fast},
        };
        for (int i = 0; i < 4; ++i) {
            ClassConfig cfg = make_class(i);
            cfg.frequencies_hz.assign(rows[i].freqs.begin(), rows[i].freqs.end());
            cfg.amplitude_transition = rows[i].transition;
            cfg.modulation_speed = rows[i].speed;
            cfg.envelope_segment_s = 0.005;
            spec.classes.push_back(std::move(cfg));
        }
        break;
    }
    }
    return spec;
}

SignalBuffer gen_background_noise(const NoiseModel& model, std::size_t n_samples,
                                  std::uint32_t sample_rate_hz, Rng& rng) {
    validate(model);
    if (n_samples == 0) throw ValidationError("gen_background_noise: n_samples must be > 0");
    if (sample_rate_hz == 0) throw ValidationError("gen_background_noise: rate must be > 0");

    SignalBuffer out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.assign(n_samples, 0.0);

    if (model.level > 0.0) {
        // white Gaussian shaped to 1/f^slope in the frequency domain, then
        // scaled to the requested RMS
        const std::size_t padded = next_pow2(n_samples);
        std::vector<std::complex<double>> buf(padded);
        for (auto& v : buf) v = {rng.gaussian(), 0.0};
        fft_pow2(buf, false);
        buf[0] = 0.0; // drop DC so the output is zero-mean
        for (std::size_t k = 1; k < padded; ++k) {
            const std::size_t fold = std::min(k, padded - k);
            const double f_hz = static_cast<double>(fold) * sample_rate_hz / padded;
            buf[k] *= std::pow(f_hz, -model.spectral_slope / 2.0);
        }
        fft_pow2(buf, true);
        double ss = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) ss += buf[i].real() * buf[i].real();
        const double rms = std::sqrt(ss / static_cast<double>(n_samples));
        const double scale = rms > 0.0 ? model.level / rms : 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) out.samples[i] = buf[i].real() * scale;
    }

    const double duration = static_cast<double>(n_samples) / sample_rate_hz;
    const int count = sample_poisson(model.impulse_rate_per_s * duration, rng);
    for (int k = 0; k < count; ++k) {
        const std::size_t start = std::min(
            n_samples - 1, static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n_samples)));
        const int width = 1 + static_cast<int>(rng.uniform01() * 3.0); // 1-3 samples
        const double amp =
            rng.uniform(model.impulse_amp_range.first, model.impulse_amp_range.second);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        for (int j = 0; j < width && start + static_cast<std::size_t>(j) < n_samples; ++j)
            out.samples[start + static_cast<std::size_t>(j)] += sign * amp;
    }
    return out;
}

// raised-cosine fade weights for one segment period
static std::vector<double> fade_table(std::size_t seg_samples) {
    std::vector<double> fade(seg_samples);
    for (std::size_t i = 0; i < seg_samples; ++i)
        fade[i] = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) /
                                       static_cast<double>(seg_samples));
    return fade;
}

std::vector<double> segment_envelope(std::size_t n_samples, std::size_t seg_samples,
                                     const AmplitudeModel& model, Rng& rng) {
    if (seg_samples == 0) throw ValidationError("segment_envelope: seg_samples must be > 0");
    const std::size_t n_knots = n_samples / seg_samples + 2;
    std::vector<double> knots(n_knots);
    for (auto& a : knots) a = sample_envelope_amplitude(model, rng);

    // raised-cosine interpolation; the envelope equals knot s exactly at
    // sample s*seg_samples
    const std::vector<double> fade = fade_table(seg_samples);
    std::vector<double> env(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        const std::size_t s = t / seg_samples;
        const double g = fade[t - s * seg_samples];
        env[t] = knots[s] * (1.0 - g) + knots[s + 1] * g;
    }
    return env;
}

SignalBuffer gen_statistical_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng) {
    if (spec.kind != DatasetKind::statistical)
        config_error(cfg, "gen_statistical_sample called with non-statistical spec");
    check_frequencies(cfg, 3, spec.sample_rate_hz);
    validate(cfg.amplitude_model);
    if (cfg.ripple_depth < 0.0 || cfg.ripple_depth >= 1.0)
        config_error(cfg, "ripple_depth must be in [0, 1)");
    if (!(cfg.tone_coherence_s > 0.0)) config_error(cfg, "tone_coherence_s must be > 0");

    const std::size_t n = clip_samples(spec);
    const std::size_t seg = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.envelope_segment_s * spec.sample_rate_hz)));

    // Each tone carries one mixture-drawn base amplitude per clip, a bounded
    // segment-wise ripple around it, and a random-walk phase whose coherence
    // time is tone_coherence_s. The phase wobble carries the stochastic
    // frequency variation; the histogram of base amplitudes across a dataset
    // follows the Rayleigh/K mixture.
    const double phase_step_std =
        std::sqrt(2.0 / (cfg.tone_coherence_s * spec.sample_rate_hz));

    std::vector<double> acc(n, 0.0);
    std::vector<double> env(n);
    for (double f : cfg.frequencies_hz) {
        const double base = sample_envelope_amplitude(cfg.amplitude_model, rng);
        double phase = rng.uniform(0.0, kTwoPi);

        const std::size_t n_knots = n / seg + 2;
        std::vector<double> knots(n_knots);
        for (auto& k : knots) k = 1.0 + cfg.ripple_depth * rng.uniform(-1.0, 1.0);

        const std::vector<double> fade = fade_table(seg);
        const double w = kTwoPi * f / spec.sample_rate_hz;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t s = t / seg;
            const double g = fade[t - s * seg];
            env[t] = base * (knots[s] * (1.0 - g) + knots[s + 1] * g);
            acc[t] += env[t] * std::sin(w * static_cast<double>(t) + phase);
            phase += phase_step_std * rng.gaussian();
        }
    }

    const SignalBuffer noise = gen_background_noise(cfg.noise, n, spec.sample_rate_hz, rng);
    for (std::size_t t = 0; t < n; ++t) acc[t] += noise.samples[t];
    peak_normalize(acc);

    return SignalBuffer{std::move(acc), spec.sample_rate_hz};
}

SignalBuffer gen_structural_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng) {
    if (spec.kind != DatasetKind::structural)
        config_error(cfg, "gen_structural_sample called with non-structural spec");
    validate(cfg.harmonic, spec.sample_rate_hz);

    const std::size_t n = clip_samples(spec);
    const int harmonics = cfg.harmonic.n_harmonics;

    std::vector<double> freqs(static_cast<std::size_t>(harmonics));
    for (int k = 0; k < harmonics; ++k) {
        const double jitter = rng.uniform(-cfg.harmonic.jitter_hz, cfg.harmonic.jitter_hz);
        freqs[static_cast<std::size_t>(k)] = (k + 1) * cfg.harmonic.base_hz + jitter;
    }
    std::vector<double> phases(static_cast<std::size_t>(harmonics));
    for (auto& p : phases) p = rng.uniform(0.0, kTwoPi);

    std::vector<double> acc(n, 0.0);
    const double inv_last = n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0;
    for (int k = 0; k < harmonics; ++k) {
        const double w = kTwoPi * freqs[static_cast<std::size_t>(k)] / spec.sample_rate_hz;
        const double amp = 1.0 / (k + 1); // gentle harmonic rolloff
        const double phase = phases[static_cast<std::size_t>(k)];
        for (std::size_t t = 0; t < n; ++t)
            acc[t] += amp * std::sin(w * static_cast<double>(t) + phase);
    }
    for (std::size_t t = 0; t < n; ++t)
        acc[t] *= envelope_shape_value(cfg.envelope_shape, static_cast<double>(t) * inv_last);

    const SignalBuffer noise = gen_background_noise(cfg.noise, n, spec.sample_rate_hz, rng);
    for (std::size_t t = 0; t < n; ++t) acc[t] += noise.samples[t];
    peak_normalize(acc);

    return SignalBuffer{std::move(acc), spec.sample_rate_hz};
}

SignalBuffer gen_mixed_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng) {
    if (spec.kind != DatasetKind::mixed)
        config_error(cfg, "gen_mixed_sample called with non-mixed spec");
    check_frequencies(cfg, 4, spec.sample_rate_hz);
    validate(cfg.amplitude_model);
    if (cfg.amplitude_transition == AmplitudeTransition::none)
        config_error(cfg, "mixed sample needs a transition direction");

    const std::size_t n = clip_samples(spec);
    const std::size_t seg = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.envelope_segment_s * spec.sample_rate_hz)));

    ModulationPlan mod;
    if (cfg.modulation) {
        mod = *cfg.modulation;
        validate(mod);
    } else {
        const auto [lo, hi] = modulation_rate_range(cfg.modulation_speed);
        mod.depth = rng.uniform(0.1, 0.3);
        mod.rate_hz = rng.uniform(lo, hi);
    }

    BlendPlan blend;
    if (cfg.blend) {
        blend = *cfg.blend;
        validate(blend);
    } else {
        blend.center_s = rng.uniform(0.2 * spec.duration_s, 0.8 * spec.duration_s);
        blend.width_s = rng.uniform(0.5, 1.0);
    }

    AmplitudeModel rayleigh_only = cfg.amplitude_model;
    rayleigh_only.p_rayleigh = 1.0;
    AmplitudeModel k_only = cfg.amplitude_model;
    k_only.p_rayleigh = 0.0;

    std::vector<double> acc(n, 0.0);
    const double dt = 1.0 / spec.sample_rate_hz;
    for (double f : cfg.frequencies_hz) {
        const double phase = rng.uniform(0.0, kTwoPi);
        const auto env_rayleigh = segment_envelope(n, seg, rayleigh_only, rng);
        const auto env_k = segment_envelope(n, seg, k_only, rng);

        std::vector<double> env(n);
        for (std::size_t t = 0; t < n; ++t) {
            const double w = blend_weight(static_cast<double>(t) * dt, blend);
            // the Gaussian weight carries the transition target
            const double alpha = cfg.amplitude_transition == AmplitudeTransition::k_to_rayleigh
                                     ? w * env_rayleigh[t] + (1.0 - w) * env_k[t]
                                     : w * env_k[t] + (1.0 - w) * env_rayleigh[t];
            const double ripple =
                1.0 + mod.depth * std::sin(kTwoPi * mod.rate_hz * static_cast<double>(t) * dt);
            env[t] = alpha * ripple;
        }
        add_tone(acc, env, f, phase, spec.sample_rate_hz);
    }

    const SignalBuffer noise = gen_background_noise(cfg.noise, n, spec.sample_rate_hz, rng);
    for (std::size_t t = 0; t < n; ++t) acc[t] += noise.samples[t];
    peak_normalize(acc);

    return SignalBuffer{std::move(acc), spec.sample_rate_hz};
}

SignalBuffer gen_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng) {
    switch (spec.kind) {
    case DatasetKind::statistical: return gen_statistical_sample(cfg, spec, rng);
    case DatasetKind::structural: return gen_structural_sample(cfg, spec, rng);
    case DatasetKind::mixed: return gen_mixed_sample(cfg, spec, rng);
    }
    throw ValidationError("unknown dataset kind");
}

Manifest generate_dataset(const DatasetSpec& spec, const std::filesystem::path& out_dir,
                          const GenerateOptions& options) {
    validate(spec);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    const std::size_t per_class = static_cast<std::size_t>(spec.samples_per_class);
    const std::size_t total = spec.classes.size() * per_class;

    Manifest manifest;
    manifest.base_dir = out_dir;
    manifest.rows.resize(total);
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
        const auto& cfg = spec.classes[c];
        fs::create_directories(out_dir / cfg.class_name, ec);
        if (ec)
            throw IoError("cannot create class directory for '" + cfg.class_name +
                          "': " + ec.message());
        for (std::size_t i = 0; i < per_class; ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "%s_%05zu.wav", cfg.class_name.c_str(), i);
            ManifestRow& row = manifest.rows[c * per_class + i];
            row.path = cfg.class_name + "/" + name;
            row.class_name = cfg.class_name;
            row.seed = derive_seed(spec.master_seed, c, per_class, i);
            row.kind = to_string(spec.kind);
            row.duration_s = spec.duration_s;
            row.sample_rate_hz = spec.sample_rate_hz;
        }
    }

    std::atomic<std::size_t> written{0};
    try {
        parallel_for(total, options.workers, [&](std::size_t idx) {
            const std::size_t c = idx / per_class;
            const auto& row = manifest.rows[idx];
            Rng rng(row.seed);
            const SignalBuffer buf = gen_sample(spec.classes[c], spec, rng);
            write_wav(buf, out_dir / row.path, options.format);
            written.fetch_add(1);
        });
    } catch (const Error& e) {
        throw IoError("dataset generation aborted after " + std::to_string(written.load()) +
                      " of " + std::to_string(total) + " files: " + e.what());
    }

    write_manifest(manifest, out_dir / "manifest.csv");
    return manifest;
}

} // namespace sonartex
