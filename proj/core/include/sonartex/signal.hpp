#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sonartex {

/// Mono sample sequence plus its rate. Samples are dimensionless amplitudes,
/// nominally within [-1, 1] once normalized.
struct SignalBuffer {
    std::vector<double> samples;
    std::uint32_t sample_rate_hz = 32000;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return sample_rate_hz == 0 ? 0.0
                                   : static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Throws ValidationError if the rate is zero or any sample is NaN/Inf.
void validate(const SignalBuffer& signal);

} // namespace sonartex
