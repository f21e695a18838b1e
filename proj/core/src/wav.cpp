#include "sonartex/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "sonartex/errors.hpp"
#include "store_util.hpp"

namespace sonartex {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t get_u32le(const std::string& b, std::size_t off) {
    return static_cast<std::uint8_t>(b[off]) | (static_cast<std::uint8_t>(b[off + 1]) << 8) |
           (static_cast<std::uint8_t>(b[off + 2]) << 16) |
           (static_cast<std::uint8_t>(b[off + 3]) << 24);
}

std::uint16_t get_u16le(const std::string& b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[off]) |
                                      (static_cast<std::uint8_t>(b[off + 1]) << 8));
}

float u32_to_float(std::uint32_t bits) {
    static_assert(sizeof(float) == 4);
    return std::bit_cast<float>(bits);
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t offset,
                            const std::string& what) {
    throw ParseError(path.string() + ": malformed WAV at byte " + std::to_string(offset) +
                     ": " + what);
}

} // namespace

void write_wav(const SignalBuffer& signal, const std::filesystem::path& path, WavFormat format) {
    if (signal.sample_rate_hz == 0) throw ValidationError("write_wav: sample rate must be > 0");
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        const double s = signal.samples[i];
        if (!(s >= -1.0 && s <= 1.0)) // also rejects NaN
            throw ValidationError("write_wav: sample " + std::to_string(i) +
                                  " out of [-1, 1]; normalize before writing");
    }

    const std::uint32_t n = static_cast<std::uint32_t>(signal.samples.size());
    const std::uint16_t bytes_per_sample = format == WavFormat::pcm16 ? 2 : 4;
    const std::uint32_t data_len = n * bytes_per_sample;

    std::string out;
    out.reserve(64 + data_len);
    using detail::put_u16le;
    using detail::put_u32le;

    // float32 carries the canonical 18-byte fmt chunk (cbSize = 0) plus a
    // fact chunk, as required for non-PCM codecs; pcm16 uses the classic
    // 16-byte fmt.
    const bool is_float = format == WavFormat::float32;
    const std::uint32_t fmt_len = is_float ? 18 : 16;
    const std::uint32_t riff_len =
        4 + (8 + fmt_len) + (is_float ? 8 + 4 : 0) + 8 + data_len;

    out += "RIFF";
    put_u32le(out, riff_len);
    out += "WAVE";

    out += "fmt ";
    put_u32le(out, fmt_len);
    put_u16le(out, is_float ? kFormatFloat : kFormatPcm);
    put_u16le(out, 1); // mono
    put_u32le(out, signal.sample_rate_hz);
    put_u32le(out, signal.sample_rate_hz * bytes_per_sample);
    put_u16le(out, bytes_per_sample);
    put_u16le(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
    if (is_float) put_u16le(out, 0); // cbSize

    if (is_float) {
        out += "fact";
        put_u32le(out, 4);
        put_u32le(out, n);
    }

    out += "data";
    put_u32le(out, data_len);
    if (format == WavFormat::pcm16) {
        for (double s : signal.samples) {
            const long v = std::lround(s * 32768.0);
            const std::int16_t q = static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
            put_u16le(out, static_cast<std::uint16_t>(q));
        }
    } else {
        for (double s : signal.samples) {
            const float f = static_cast<float>(s);
            put_u32le(out, std::bit_cast<std::uint32_t>(f));
        }
    }

    detail::write_file_atomic(path, out);
}

SignalBuffer read_wav(const std::filesystem::path& path) {
    const std::string b = detail::read_file(path);
    if (b.size() < 12) malformed(path, b.size(), "file shorter than a RIFF header");
    if (b.compare(0, 4, "RIFF") != 0) malformed(path, 0, "missing RIFF tag");
    if (b.compare(8, 4, "WAVE") != 0) malformed(path, 8, "missing WAVE tag");

    bool have_fmt = false;
    std::uint16_t format_code = 0;
    std::uint16_t channels = 0;
    std::uint16_t bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_off = 0;
    std::size_t data_len = 0;

    std::size_t off = 12;
    while (off + 8 <= b.size()) {
        const std::string id = b.substr(off, 4);
        const std::uint32_t len = get_u32le(b, off + 4);
        const std::size_t body = off + 8;
        if (body + len > b.size())
            malformed(path, off, "chunk '" + id + "' overruns the file");
        if (id == "fmt ") {
            if (len < 16) malformed(path, off, "fmt chunk shorter than 16 bytes");
            format_code = get_u16le(b, body);
            channels = get_u16le(b, body + 2);
            rate = get_u32le(b, body + 4);
            bits = get_u16le(b, body + 14);
            if (format_code == kFormatExtensible) {
                if (len < 40) malformed(path, off, "extensible fmt chunk shorter than 40 bytes");
                format_code = get_u16le(b, body + 24); // first two GUID bytes
            }
            have_fmt = true;
        } else if (id == "data") {
            data_off = body;
            data_len = len;
        }
        off = body + len + (len & 1); // chunks are word-aligned
    }

    if (!have_fmt) malformed(path, off, "no fmt chunk");
    if (data_off == 0) malformed(path, off, "no data chunk");
    if (rate == 0) malformed(path, data_off, "zero sample rate");
    if (channels != 1 && channels != 2)
        throw ParseError(path.string() + ": unsupported channel count " +
                         std::to_string(channels) + " (mono or stereo only)");

    const bool is_float = format_code == kFormatFloat;
    if (format_code != kFormatPcm && !is_float)
        throw ParseError(path.string() + ": unsupported format code " +
                         std::to_string(format_code) + " (PCM or IEEE float only)");
    if (is_float && bits != 32)
        throw ParseError(path.string() + ": unsupported float width " + std::to_string(bits));
    if (!is_float && bits != 16 && bits != 24)
        throw ParseError(path.string() + ": unsupported PCM width " + std::to_string(bits));

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (frame_bytes == 0 || data_len % frame_bytes != 0)
        malformed(path, data_off, "data length is not a whole number of frames");
    const std::size_t frames = data_len / frame_bytes;

    SignalBuffer out;
    out.sample_rate_hz = rate;
    out.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const std::size_t o = data_off + (f * channels + c) * bytes_per_sample;
            double v = 0.0;
            if (is_float) {
                v = u32_to_float(get_u32le(b, o));
                if (!std::isfinite(v)) malformed(path, o, "non-finite float sample");
            } else if (bits == 16) {
                v = static_cast<std::int16_t>(get_u16le(b, o)) / 32768.0;
            } else { // pcm24
                std::int32_t raw = static_cast<std::uint8_t>(b[o]) |
                                   (static_cast<std::uint8_t>(b[o + 1]) << 8) |
                                   (static_cast<std::uint8_t>(b[o + 2]) << 16);
                if (raw & 0x800000) raw |= 0xFF000000;
                v = raw / 8388608.0;
            }
            acc += v;
        }
        out.samples[f] = std::clamp(acc / channels, -1.0, 1.0);
    }
    return out;
}

} // namespace sonartex
