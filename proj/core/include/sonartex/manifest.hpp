#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sonartex {

struct ManifestRow {
    std::string path; // relative to the manifest's directory
    std::string class_name;
    std::uint64_t seed = 0;
    std::string kind;
    double duration_s = 0.0;
    std::uint32_t sample_rate_hz = 0;
};

/// Index of generated (or to-be-scored) audio files. `base_dir` is where the
/// manifest lives; row paths resolve against it.
struct Manifest {
    std::vector<ManifestRow> rows;
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const ManifestRow& row) const {
        std::filesystem::path p(row.path);
        return p.is_absolute() ? p : base_dir / p;
    }
};

/// RFC-4180 CSV with a header row; written atomically (temp file + rename).
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

Manifest read_manifest(const std::filesystem::path& path);

} // namespace sonartex
