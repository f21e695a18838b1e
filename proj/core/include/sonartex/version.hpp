#pragma once

namespace sonartex {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

} // namespace sonartex
