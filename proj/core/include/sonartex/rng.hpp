#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sonartex {

/// Deterministic generator: xoshiro256++ seeded through SplitMix64.
/// The algorithm is pinned here (rather than using std::mt19937) so that a
/// seed produces the same stream on every platform and standard library,
/// which is what makes golden-file dataset tests possible.
/// Reference code: https://prng.di.unimi.it/
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1); safe as a log() argument.
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Standard normal via Box-Muller. Draws come in pairs; the second one is
    /// cached, so the stream stays deterministic for a given seed.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

/// Per-sample seed for (class c, sample i) under a master seed. The flat
/// offset c*samples_per_class + i + 1 is unique within a dataset, so derived
/// streams cannot collide with each other or with the master.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint64_t class_index,
                                 std::uint64_t samples_per_class,
                                 std::uint64_t sample_index) {
    return master_seed + class_index * samples_per_class + sample_index + 1;
}

} // namespace sonartex
