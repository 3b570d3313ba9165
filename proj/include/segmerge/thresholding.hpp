#pragma once

#include "segmerge/image.hpp"

#include <array>
#include <cstdint>

namespace segmerge {

/// One byte per pixel: 1 = foreground, 0 = background.
using BinaryMask = Plane<std::uint8_t>;

/// Full rectangle of active cells anchored at its center.
class StructuringElement {
public:
    /// Throws std::invalid_argument unless both sides are odd and positive.
    StructuringElement(int width, int height);
    static StructuringElement square(int side) { return {side, side}; }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int radius_x() const noexcept { return width_ / 2; }
    int radius_y() const noexcept { return height_ / 2; }

private:
    int width_;
    int height_;
};

using IntensityHistogram = std::array<std::uint64_t, 256>;

IntensityHistogram intensity_histogram(const GrayImage& img);

/// Level t maximizing between-class variance of {<= t} vs {> t}; smallest t on ties.
/// Throws DegenerateInputError("otsu", ...) when the image has a single intensity.
std::uint8_t otsu_threshold(const GrayImage& img);
std::uint8_t otsu_threshold(const IntensityHistogram& hist);

/// Foreground iff intensity > t.
BinaryMask binarize(const GrayImage& img, std::uint8_t t);

// Out-of-bounds cells count as background for both operators.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// `iterations` erosions followed by `iterations` dilations.
BinaryMask open(const BinaryMask& mask, const StructuringElement& se, int iterations = 1);

BinaryMask complement(const BinaryMask& mask);
std::size_t count_foreground(const BinaryMask& mask);

}  // namespace segmerge
