#pragma once

// Internal helpers shared by the file writers. Not installed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sonartex::detail {

/// Writes bytes to a temp file next to `path`, then renames into place, so a
/// crashed run never leaves a half-written file at `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Reads an entire file; throws IoError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// RFC-4180 field quoting (quotes only when the field needs it).
std::string csv_escape(const std::string& field);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Splits one CSV record (no embedded newlines in our files).
std::vector<std::string> csv_split(const std::string& line);

inline void put_u16le(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

} // namespace sonartex::detail
