#pragma once

#include <filesystem>
#include <string_view>

#include "stemnoise/image.hpp"

namespace stemnoise {

/// BT.601 luminance from linear 8-bit-scale RGB. Result stays floating point.
inline double rgb_to_luminance(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

/// Decode a PNG, BMP, or PGM file (detected by content, not extension) into a
/// luminance grid. Grayscale sources pass through unchanged; color sources are
/// reduced with rgb_to_luminance. Throws IoError on unreadable/undecodable
/// files and DimensionError for images smaller than 2x2.
LuminanceImage load_image(const std::filesystem::path& path);

/// Encode an 8-bit grayscale image, format chosen by extension (.png or .pgm).
/// The file is written atomically: a temporary in the same directory is
/// renamed over the target, so a failed write never leaves partial output.
/// Throws IoError on unwritable paths or unknown extensions.
void write_gray(const GrayImage& image, const std::filesystem::path& path);

/// Atomically replace `path` with `contents` (temp file + rename).
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace stemnoise
