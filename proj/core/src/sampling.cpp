#include "sonartex/sampling.hpp"

#include <cmath>
#include <string>

#include "sonartex/errors.hpp"

namespace sonartex {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("invalid parameter: ") + what);
}

} // namespace

void validate(const AmplitudeModel& m) {
    require(m.rayleigh_sigma > 0, "rayleigh_sigma must be > 0");
    require(m.k_shape > 0, "k_shape must be > 0");
    require(m.k_scale > 0, "k_scale must be > 0");
    require(m.p_rayleigh >= 0.0 && m.p_rayleigh <= 1.0, "p_rayleigh must be in [0, 1]");
}

void validate(const BlendPlan& p) {
    require(p.width_s > 0, "blend width_s must be > 0");
}

void validate(const ModulationPlan& p) {
    require(p.depth >= 0, "modulation depth must be >= 0");
    require(p.rate_hz > 0, "modulation rate_hz must be > 0");
}

void validate(const HarmonicPlan& p, std::uint32_t sample_rate_hz) {
    require(p.base_hz > 0, "harmonic base_hz must be > 0");
    require(p.jitter_hz >= 0, "harmonic jitter_hz must be >= 0");
    require(p.n_harmonics >= 1, "n_harmonics must be >= 1");
    const double worst = p.n_harmonics * p.base_hz + p.jitter_hz;
    if (worst >= sample_rate_hz / 2.0)
        throw ValidationError("harmonic stack reaches " + std::to_string(worst) +
                              " Hz, at or above Nyquist (" +
                              std::to_string(sample_rate_hz / 2.0) + " Hz)");
}

void validate(const NoiseModel& m) {
    require(m.level >= 0, "noise level must be >= 0");
    require(m.impulse_rate_per_s >= 0, "impulse_rate_per_s must be >= 0");
    require(m.impulse_amp_range.first <= m.impulse_amp_range.second,
            "impulse_amp_range must be ordered");
}

double sample_rayleigh(double sigma, Rng& rng) {
    if (sigma <= 0) throw ValidationError("sample_rayleigh: sigma must be > 0");
    const double u = rng.uniform_open01(); // (0,1): result is strictly positive
    return sigma * std::sqrt(-2.0 * std::log(u));
}

double sample_gamma(double shape, double scale, Rng& rng) {
    if (shape <= 0 || scale <= 0)
        throw ValidationError("sample_gamma: shape and scale must be > 0");
    // Marsaglia-Tsang; shape < 1 is boosted through Gamma(shape+1) * U^(1/shape).
    if (shape < 1.0) {
        const double u = rng.uniform_open01();
        return sample_gamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open01();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_k(double k_shape, double k_scale, Rng& rng) {
    if (k_shape <= 0 || k_scale <= 0)
        throw ValidationError("sample_k: shape and scale must be > 0");
    const double z = sample_gamma(k_shape, k_scale, rng);
    return sample_rayleigh(std::sqrt(z / 2.0), rng);
}

double sample_envelope_amplitude(const AmplitudeModel& model, Rng& rng) {
    validate(model);
    if (rng.uniform01() < model.p_rayleigh)
        return sample_rayleigh(model.rayleigh_sigma, rng);
    return sample_k(model.k_shape, model.k_scale, rng);
}

int sample_poisson(double mean, Rng& rng) {
    if (mean < 0) throw ValidationError("sample_poisson: mean must be >= 0");
    if (mean == 0) return 0;
    // Knuth's product-of-uniforms; fine for the event counts used here.
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform_open01();
    } while (p > limit);
    return k - 1;
}

double blend_weight(double t_s, const BlendPlan& plan) {
    validate(plan);
    const double d = t_s - plan.center_s;
    return std::exp(-(d * d) / (2.0 * plan.width_s * plan.width_s));
}

} // namespace sonartex
