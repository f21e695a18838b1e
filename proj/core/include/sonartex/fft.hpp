#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sonartex {

std::size_t next_pow2(std::size_t n);

/// In-place iterative radix-2 transform. a.size() must be a power of two.
/// Forward is unnormalized; inverse divides by n.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

/// Transform of arbitrary length (Bluestein chirp for non powers of two).
std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a, bool inverse);

} // namespace sonartex
