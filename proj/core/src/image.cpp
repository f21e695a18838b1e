#include "sonartex/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <zlib.h>

#include "sonartex/errors.hpp"
#include "store_util.hpp"

namespace sonartex {

namespace {

void put_u32be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>(v & 0xFF));
}

void put_chunk(std::string& out, const char type[4], const std::string& body) {
    put_u32be(out, static_cast<std::uint32_t>(body.size()));
    const std::size_t crc_start = out.size();
    out.append(type, 4);
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                           static_cast<uInt>(4 + body.size()));
    put_u32be(out, static_cast<std::uint32_t>(crc));
}

} // namespace

void write_png_gray8(const Matrix& values, const std::filesystem::path& path) {
    if (values.rows == 0 || values.cols == 0)
        throw ValidationError("write_png_gray8: empty matrix");

    double lo = values.data[0];
    double hi = values.data[0];
    for (double v : values.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;

    // filter byte 0 + one gray byte per column, per scanline
    std::string raw;
    raw.reserve(values.rows * (values.cols + 1));
    for (std::size_t r = 0; r < values.rows; ++r) {
        raw.push_back('\0');
        for (std::size_t c = 0; c < values.cols; ++c) {
            const double v = (values(r, c) - lo) * scale;
            raw.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(v))));
        }
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(comp_len, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &comp_len,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  6) != Z_OK)
        throw IoError("PNG deflate failed for " + path.string());
    compressed.resize(comp_len);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32be(ihdr, static_cast<std::uint32_t>(values.cols));
    put_u32be(ihdr, static_cast<std::uint32_t>(values.rows));
    ihdr.push_back(8);    // bit depth
    ihdr.push_back(0);    // grayscale
    ihdr.push_back(0);    // deflate
    ihdr.push_back(0);    // adaptive filtering
    ihdr.push_back(0);    // no interlace
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", compressed);
    put_chunk(out, "IEND", "");

    detail::write_file_atomic(path, out);
}

void write_matrix_csv(const Matrix& values, const std::filesystem::path& path) {
    std::ostringstream os;
    os.precision(9);
    for (std::size_t r = 0; r < values.rows; ++r) {
        for (std::size_t c = 0; c < values.cols; ++c) {
            if (c) os << ',';
            os << values(r, c);
        }
        os << '\n';
    }
    detail::write_file_atomic(path, os.str());
}

} // namespace sonartex
