#pragma once

#include <cstdint>
#include <utility>

#include "sonartex/rng.hpp"

namespace sonartex {

/// Two-branch amplitude law: Rayleigh(sigma) with probability p_rayleigh,
/// otherwise K(shape, scale). Defaults give both branches comparable mean
/// power so neither dominates a mixture.
struct AmplitudeModel {
    double rayleigh_sigma = 0.5;
    double k_shape = 1.5;
    double k_scale = 0.4;
    double p_rayleigh = 0.5;
};

/// Gaussian weight for interpolating between two envelope processes:
/// w(t) = exp(-(t - center)^2 / (2 width^2)).
struct BlendPlan {
    double center_s = 2.5;
    double width_s = 0.75;
};

/// Sinusoidal envelope modulation: envelope * (1 + depth*sin(2*pi*rate*t)).
struct ModulationPlan {
    double depth = 0.2;
    double rate_hz = 2.0;
};

/// Harmonic stack spec: realized frequencies are k*base_hz + jitter with
/// jitter uniform in [-jitter_hz, +jitter_hz] per harmonic.
struct HarmonicPlan {
    double base_hz = 2200.0;
    double jitter_hz = 50.0;
    int n_harmonics = 3;
};

/// Background process: colored noise at a target RMS plus Poisson-timed
/// short bursts.
struct NoiseModel {
    double level = 0.008;                              // RMS of the colored part
    double impulse_rate_per_s = 2.0;                   // Poisson event rate
    std::pair<double, double> impulse_amp_range{0.02, 0.06};
    double spectral_slope = 1.0;                       // 1/f^slope power shaping
};

void validate(const AmplitudeModel& model);
void validate(const BlendPlan& plan);
void validate(const ModulationPlan& plan);
void validate(const HarmonicPlan& plan, std::uint32_t sample_rate_hz);
void validate(const NoiseModel& model);

/// One Rayleigh(sigma) draw; always > 0.
double sample_rayleigh(double sigma, Rng& rng);

/// One Gamma(shape, scale) draw (Marsaglia-Tsang squeeze method).
double sample_gamma(double shape, double scale, Rng& rng);

/// One K-distributed amplitude via the compound form: texture z ~ Gamma(shape,
/// scale) modulating Rayleigh speckle x ~ Rayleigh(sqrt(z/2)); always > 0.
double sample_k(double k_shape, double k_scale, Rng& rng);

/// One draw of the Rayleigh/K mixture in AmplitudeModel.
double sample_envelope_amplitude(const AmplitudeModel& model, Rng& rng);

/// Poisson count by inversion; exact for the small means used here.
int sample_poisson(double mean, Rng& rng);

/// Gaussian blend weight in (0, 1]; peaks at 1 when t_s == plan.center_s.
double blend_weight(double t_s, const BlendPlan& plan);

} // namespace sonartex
