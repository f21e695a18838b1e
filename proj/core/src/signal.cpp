#include "sonartex/signal.hpp"

#include <cmath>

#include "sonartex/errors.hpp"

namespace sonartex {

void validate(const SignalBuffer& signal) {
    if (signal.sample_rate_hz == 0)
        throw ValidationError("signal sample_rate_hz must be positive");
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        if (!std::isfinite(signal.samples[i]))
            throw ValidationError("signal sample " + std::to_string(i) + " is not finite");
    }
}

} // namespace sonartex
