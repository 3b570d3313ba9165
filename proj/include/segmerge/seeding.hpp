#pragma once

#include "segmerge/image.hpp"
#include "segmerge/thresholding.hpp"

#include <cstdint>

namespace segmerge {

/// Exact Euclidean distance to the nearest background pixel, kept as integer
/// squared distances; `at()` takes the square root.
class DistanceMap {
public:
    explicit DistanceMap(Plane<std::uint64_t> squared);

    int width() const noexcept { return squared_.width(); }
    int height() const noexcept { return squared_.height(); }
    std::uint64_t squared_at(int x, int y) const { return squared_.at(x, y); }
    double at(int x, int y) const;
    const Plane<std::uint64_t>& squared() const noexcept { return squared_; }
    std::uint64_t max_squared() const noexcept { return max_squared_; }
    double max() const;

private:
    Plane<std::uint64_t> squared_;
    std::uint64_t max_squared_ = 0;
};

/// 0 = unmarked, 1..count() = marker regions.
class MarkerMap {
public:
    MarkerMap() = default;
    MarkerMap(Plane<std::uint32_t> labels, std::uint32_t count) : labels_(std::move(labels)), count_(count) {}

    int width() const noexcept { return labels_.width(); }
    int height() const noexcept { return labels_.height(); }
    std::uint32_t at(int x, int y) const { return labels_.at(x, y); }
    std::uint32_t count() const noexcept { return count_; }
    const Plane<std::uint32_t>& labels() const noexcept { return labels_; }

private:
    Plane<std::uint32_t> labels_;
    std::uint32_t count_ = 0;
};

/// Throws DegenerateInputError("distance-transform", ...) when the mask has no background.
DistanceMap distance_transform(const BinaryMask& mask);

/// Foreground iff distance > fraction * max. Throws DegenerateInputError when max is 0.
BinaryMask threshold_distance(const DistanceMap& dmap, double fraction);

/// 8-connected components numbered in row-major first-encounter order.
MarkerMap label_components(const BinaryMask& mask);

struct MarkerSet {
    MarkerMap markers;
    std::uint32_t foreground_count = 0;  // ids 1..foreground_count
    std::uint32_t background_count = 0;  // ids foreground_count+1..markers.count()
};

/// Foreground markers are the components of the thresholded distance map of
/// `opened`. With `with_background`, the same procedure runs on the complement
/// and its components (minus any pixel touching a foreground marker) are
/// appended as background markers.
MarkerSet generate_markers(const BinaryMask& opened, double fraction, bool with_background);

/// Max distance -> 255, rounded.
GrayImage render_distance(const DistanceMap& dmap);

}  // namespace segmerge
