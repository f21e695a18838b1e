#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sonartex/manifest.hpp"
#include "sonartex/rng.hpp"
#include "sonartex/sampling.hpp"
#include "sonartex/signal.hpp"
#include "sonartex/wav.hpp"

namespace sonartex {

enum class DatasetKind { statistical, structural, mixed };

enum class AmplitudeTransition { none, k_to_rayleigh, rayleigh_to_k };

enum class ModulationSpeed { slow, fast };

enum class EnvelopeShape { triangular, exp_decay, plateau, ramp };

std::string to_string(DatasetKind kind);
std::string to_string(AmplitudeTransition transition);
std::string to_string(ModulationSpeed speed);
std::string to_string(EnvelopeShape shape);

/// Per-class synthesis recipe. Fields apply per dataset kind: statistical
/// uses frequencies_hz (3 tones) + amplitude_model + noise; structural uses
/// harmonic + envelope_shape + noise; mixed uses frequencies_hz (4 tones) +
/// amplitude_model + transition + modulation + blend + noise.
struct ClassConfig {
    std::string class_name;
    std::vector<double> frequencies_hz;
    AmplitudeTransition amplitude_transition = AmplitudeTransition::none;
    ModulationSpeed modulation_speed = ModulationSpeed::slow;
    std::optional<ModulationPlan> modulation; // fixed override; else drawn per sample
    std::optional<BlendPlan> blend;           // fixed override; else drawn per sample
    EnvelopeShape envelope_shape = EnvelopeShape::triangular;
    HarmonicPlan harmonic;
    NoiseModel noise;
    AmplitudeModel amplitude_model;
    double envelope_segment_s = 0.05; // stochastic-envelope redraw interval
    // statistical kind only: bounded segment-wise amplitude ripple around the
    // per-clip base amplitude, and tone phase-coherence time (frequency wobble)
    double ripple_depth = 0.3;
    double tone_coherence_s = 0.01;
};

/// Whole-dataset plan: classes x samples_per_class clips of duration_s at
/// sample_rate_hz, seeded from master_seed.
struct DatasetSpec {
    DatasetKind kind = DatasetKind::mixed;
    std::vector<ClassConfig> classes;
    int samples_per_class = 10000;
    double duration_s = 5.0;
    std::uint32_t sample_rate_hz = 32000;
    std::uint64_t master_seed = 1;
};

/// Throws ValidationError naming the offending class/field.
void validate(const DatasetSpec& spec);

/// Shipped per-kind defaults (4 vessel classes each).
DatasetSpec default_spec(DatasetKind kind);

/// Modulation-rate band for a speed class; depth is drawn from [0.1, 0.3].
std::pair<double, double> modulation_rate_range(ModulationSpeed speed);

/// Colored noise at model.level RMS (1/f^slope spectral shaping) plus
/// Poisson-timed bursts 1-3 samples wide.
SignalBuffer gen_background_noise(const NoiseModel& model, std::size_t n_samples,
                                  std::uint32_t sample_rate_hz, Rng& rng);

/// Piecewise stochastic envelope: one mixture draw per segment, raised-cosine
/// cross-faded between consecutive draws. Knot s sits at sample s*seg_samples.
std::vector<double> segment_envelope(std::size_t n_samples, std::size_t seg_samples,
                                     const AmplitudeModel& model, Rng& rng);

SignalBuffer gen_statistical_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng);
SignalBuffer gen_structural_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng);
SignalBuffer gen_mixed_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng);

/// Dispatches on spec.kind.
SignalBuffer gen_sample(const ClassConfig& cfg, const DatasetSpec& spec, Rng& rng);

struct GenerateOptions {
    int workers = 1;
    WavFormat format = WavFormat::float32;
};

/// Writes one WAV per sample under out_dir plus out_dir/manifest.csv.
/// Deterministic for a fixed master_seed: bytes are identical across reruns
/// and worker counts. Returns the manifest (rows class-major, index-minor).
Manifest generate_dataset(const DatasetSpec& spec, const std::filesystem::path& out_dir,
                          const GenerateOptions& options = {});

} // namespace sonartex
