#pragma once

#include <filesystem>
#include <string_view>

#include "lrt/point_set.hpp"

namespace lrt {

enum class PointFormat { csv, f64le };

/// Guesses from the extension: ".f64" / ".bin" -> f64le, otherwise csv.
PointFormat format_from_path(const std::filesystem::path& path);
PointFormat parse_format(std::string_view name);

/// f64le: little-endian u64 n, u64 d, then n*d little-endian binary64 values
/// in row-major order. CSV: one row per line, comma separated; blank lines
/// and lines starting with '#' are skipped. Throws std::runtime_error on
/// malformed input.
PointSet load_points(const std::filesystem::path& path, PointFormat format);
PointSet load_points(const std::filesystem::path& path);
void save_points(const std::filesystem::path& path, const PointSet& points, PointFormat format);

PointSet parse_csv(std::string_view text);
Matrix parse_f64le(std::string_view bytes);

}  // namespace lrt
