#pragma once

#include <filesystem>

#include "sonartex/signal.hpp"

namespace sonartex {

enum class WavFormat {
    pcm16,   // 16-bit signed PCM
    float32, // IEEE float; round-trips bit-exactly
};

/// Writes a canonical mono little-endian RIFF/WAVE file, atomically
/// (temp file + rename). Samples must lie in [-1, 1]; callers normalize.
void write_wav(const SignalBuffer& signal, const std::filesystem::path& path,
               WavFormat format = WavFormat::float32);

/// Decodes pcm16 / pcm24 / float32, mono or stereo (stereo is averaged to
/// mono). Returns samples in [-1, 1]. Malformed files raise ParseError with
/// the offending byte offset; other codecs raise ParseError as unsupported.
SignalBuffer read_wav(const std::filesystem::path& path);

} // namespace sonartex
