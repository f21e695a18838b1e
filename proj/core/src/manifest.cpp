#include "sonartex/manifest.hpp"

#include <charconv>
#include <sstream>

#include "sonartex/errors.hpp"
#include "store_util.hpp"

namespace sonartex {

namespace {

const char* kHeader = "path,class,seed,kind,duration_s,sample_rate_hz";

[[noreturn]] void bad_row(const std::filesystem::path& path, std::size_t line_no,
                          const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_u64(const std::string& s, const std::filesystem::path& p, std::size_t ln) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad_row(p, ln, "bad integer '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::filesystem::path& p, std::size_t ln) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) bad_row(p, ln, "bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        bad_row(p, ln, "bad number '" + s + "'");
    }
}

} // namespace

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::string out(kHeader);
    out += "\n";
    for (const auto& row : manifest.rows) {
        out += detail::csv_escape(row.path);
        out += ",";
        out += detail::csv_escape(row.class_name);
        out += ",";
        out += std::to_string(row.seed);
        out += ",";
        out += detail::csv_escape(row.kind);
        out += ",";
        out += detail::format_double(row.duration_s);
        out += ",";
        out += std::to_string(row.sample_rate_hz);
        out += "\n";
    }
    detail::write_file_atomic(path, out);
}

Manifest read_manifest(const std::filesystem::path& path) {
    const std::string bytes = detail::read_file(path);
    Manifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : ".";

    std::istringstream in(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto fields = detail::csv_split(line);
        if (line_no == 1) {
            if (fields.size() < 6 || fields[0] != "path")
                bad_row(path, line_no, "unexpected manifest header");
            continue;
        }
        if (fields.size() != 6)
            bad_row(path, line_no, "expected 6 fields, got " + std::to_string(fields.size()));
        ManifestRow row;
        row.path = fields[0];
        row.class_name = fields[1];
        row.seed = parse_u64(fields[2], path, line_no);
        row.kind = fields[3];
        row.duration_s = parse_double(fields[4], path, line_no);
        row.sample_rate_hz = static_cast<std::uint32_t>(parse_u64(fields[5], path, line_no));
        manifest.rows.push_back(std::move(row));
    }
    return manifest;
}

} // namespace sonartex
