#pragma once

// Deterministic test scenes. Same arguments give the same pixels on every
// platform (no std:: distributions involved).

#include "segmerge/image.hpp"

#include <cstdint>

namespace segmerge::synthetic {

/// A red and a green disk on a dark gray background.
RgbImage two_disks(int width = 256, int height = 256);

/// A bright tan ellipse broken into many cells by brightness valleys, in front
/// of a dim, near-uniform blue-gray background with low-amplitude noise.
/// Cells vary in brightness but share hue and saturation.
RgbImage textured_subject(int width = 320, int height = 256, std::uint64_t seed = 7);

/// A handful of bright ellipses in random hues over a darker noisy background.
RgbImage random_blobs(std::uint64_t seed, int width = 96, int height = 96);

}  // namespace segmerge::synthetic
