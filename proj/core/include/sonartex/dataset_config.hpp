#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "sonartex/synth.hpp"

namespace sonartex {

/// Parses the plain-text dataset config (top-level `key = value` lines plus
/// one `[class Name]` section per class; lists are comma-separated). Missing
/// keys fall back to the per-kind defaults; unknown keys are reported through
/// `warn` and skipped. Type mismatches and out-of-range values raise
/// ValidationError naming the key. An empty file yields default_spec(mixed)
/// with a warning.
DatasetSpec read_config(const std::filesystem::path& path,
                        const std::function<void(const std::string&)>& warn = {});

/// Same parser over an in-memory string (used by tests and `read_config`).
DatasetSpec parse_config(const std::string& text,
                         const std::function<void(const std::string&)>& warn = {});

/// Renders a spec in the config format (the resolved-configuration log and
/// the shipped default files use this).
std::string format_config(const DatasetSpec& spec);

} // namespace sonartex
