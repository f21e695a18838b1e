#include "sonartex/fft.hpp"

#include <cmath>

#include "sonartex/errors.hpp"

namespace sonartex {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Bluestein chirp transform: any-length DFT as a power-of-two convolution.
std::vector<std::complex<double>> bluestein(const std::vector<std::complex<double>>& in,
                                            bool inverse) {
    const std::size_t n = in.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small for large n
        const std::size_t k2 = static_cast<std::size_t>(
            (static_cast<unsigned long long>(k) * k) % (2 * n));
        const double angle = sign * kTwoPi * 0.5 * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(angle), std::sin(angle)};
    }
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
    for (std::size_t k = 0; k < n; ++k) {
        b[k] = std::conj(chirp[k]);
        if (k != 0) b[m - k] = std::conj(chirp[k]);
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    if (inverse) {
        for (auto& v : out) v /= static_cast<double>(n);
    }
    return out;
}

} // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw ValidationError("fft_pow2: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a, bool inverse) {
    if (a.size() <= 1) return a;
    if (is_pow2(a.size())) {
        fft_pow2(a, inverse);
        return a;
    }
    return bluestein(a, inverse);
}

} // namespace sonartex
