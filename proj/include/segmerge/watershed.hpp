#pragma once

#include "segmerge/image.hpp"
#include "segmerge/seeding.hpp"

#include <cstdint>
#include <filesystem>
#include <map>

namespace segmerge {

/// Non-negative relief to flood.
using ElevationMap = Plane<float>;

/// Per-pixel segment id; kBoundaryLabel marks watershed lines.
using LabelMap = Plane<std::uint32_t>;
inline constexpr std::uint32_t kBoundaryLabel = 0;

/// 3x3 Sobel magnitude with replicated borders.
ElevationMap gradient_magnitude(const GrayImage& img);

/// The intensities themselves as relief.
ElevationMap intensity_elevation(const GrayImage& img);

/// Marker-controlled priority flood over the 8-neighborhood.
///
/// Marker pixels keep their id. Their unmarked neighbors seed the frontier
/// (markers visited in row-major order, neighbors in `kNeighborOffsets`
/// order). The frontier pixel with the lowest elevation is claimed next, FIFO
/// among equal elevations. A claimed pixel whose 8-neighborhood holds two or
/// more distinct basin ids becomes boundary; otherwise it joins the single
/// basin it touches and pushes its unqueued neighbors. Boundary pixels do not
/// propagate; anything the flood never reaches is boundary as well.
///
/// Throws DegenerateInputError("watershed", ...) if there are no markers.
LabelMap watershed_flood(const ElevationMap& elevation, const MarkerMap& markers);

struct Offset {
    int dx, dy;
};
inline constexpr Offset kNeighborOffsets[8] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                               {1, 0},   {-1, 1}, {0, 1},  {1, 1}};

/// Distinct for distinct ids below 2^24; never equal to kBoundaryColor for id != 0.
Rgb label_color(std::uint32_t id, std::uint64_t seed) noexcept;
inline constexpr Rgb kBoundaryColor{0, 0, 0};

RgbImage render_labels(const LabelMap& labels, std::uint64_t seed);

/// Pixel count per label id, boundary included under id 0 when present.
std::map<std::uint32_t, std::size_t> label_areas(const LabelMap& labels);

/// Raw ids as a 16-bit grayscale PNG. Throws std::out_of_range for ids above 65535.
void save_label_map(const LabelMap& labels, const std::filesystem::path& path);
LabelMap load_label_map(const std::filesystem::path& path);

}  // namespace segmerge
