#pragma once

#include "segmerge/image.hpp"

#include <filesystem>

namespace segmerge {

/// Decode a PNG (8-bit gray, gray+alpha, RGB, RGBA or palette) or binary PPM (P6, maxval 255).
/// Gray and palette inputs are expanded to RGB; alpha is dropped.
/// Throws IoError for unreadable files and FormatError for unsupported or corrupt streams.
RgbImage load_image(const std::filesystem::path& path);

/// Writes PNG, or binary PPM when the extension is `.ppm`. Throws IoError.
void save_image(const RgbImage& img, const std::filesystem::path& path);
/// Writes an 8-bit grayscale PNG (or a P6 PPM with R=G=B for `.ppm`).
void save_image(const GrayImage& img, const std::filesystem::path& path);

/// 16-bit grayscale PNG, used for raw label ids.
void save_gray16_png(const Plane<std::uint16_t>& img, const std::filesystem::path& path);
Plane<std::uint16_t> load_gray16_png(const std::filesystem::path& path);

enum class PngColor { gray, gray_alpha, rgb, rgba, palette };

struct PngHeader {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    PngColor color = PngColor::rgb;
};

/// Reads only the IHDR of a PNG file.
PngHeader read_png_header(const std::filesystem::path& path);

}  // namespace segmerge
