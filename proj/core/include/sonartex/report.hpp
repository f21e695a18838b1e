#pragma once

#include <filesystem>
#include <vector>

#include "sonartex/texture.hpp"

namespace sonartex {

enum class ReportFormat { csv, json };

/// CSV: per-file rows (dataset,class,file,stats,strts,error) followed by the
/// group statistics in a trailing summary block. JSON: files plus per-class
/// and per-dataset groups with mean/std/n.
std::string render_report(const ScoreReport& report, ReportFormat format);

/// render_report written atomically to `path`.
void write_report(const ScoreReport& report, const std::filesystem::path& path,
                  ReportFormat format);

/// Reads the per-file rows back from a report CSV (summary rows are skipped).
std::vector<FileScore> read_score_csv(const std::filesystem::path& path);

} // namespace sonartex
