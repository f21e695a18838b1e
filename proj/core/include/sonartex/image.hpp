#pragma once

#include <filesystem>

#include "sonartex/matrix.hpp"

namespace sonartex {

/// 8-bit grayscale PNG, min-max normalized per image. Scanline r is matrix
/// row r (row 0 first); inspection output only, never parsed back.
void write_png_gray8(const Matrix& values, const std::filesystem::path& path);

/// Plain numeric CSV, one matrix row per line.
void write_matrix_csv(const Matrix& values, const std::filesystem::path& path);

} // namespace sonartex
