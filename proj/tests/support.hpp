#pragma once

// Random inputs shared by the unit and acceptance suites.

#include "segmerge/image.hpp"
#include "segmerge/thresholding.hpp"
#include "segmerge/watershed.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace segmerge::testing {

inline GrayImage random_gray(std::mt19937& rng, int w, int h, int levels = 256) {
    std::uniform_int_distribution<int> v(0, levels - 1);
    GrayImage img(w, h);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(v(rng) * 255 / std::max(levels - 1, 1));
    return img;
}

inline RgbImage random_rgb(std::mt19937& rng, int w, int h) {
    std::uniform_int_distribution<int> v(0, 255);
    RgbImage img(w, h);
    for (auto& p : img.bytes()) p = static_cast<std::uint8_t>(v(rng));
    return img;
}

inline BinaryMask random_mask(std::mt19937& rng, int w, int h, double density) {
    std::bernoulli_distribution on(density);
    BinaryMask m(w, h);
    for (auto& p : m.pixels()) p = on(rng) ? 1 : 0;
    return m;
}

/// Random blobs: density-thresholded noise, smoothed with a 3x3 majority once.
inline BinaryMask random_blobby_mask(std::mt19937& rng, int w, int h, double density) {
    BinaryMask m = random_mask(rng, w, h, density);
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) n += m.contains(x + dx, y + dy) && m.at(x + dx, y + dy);
            out.at(x, y) = n >= 5;
        }
    return out;
}

inline bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("segmerge-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(SEGMERGE_TEST_DATA_DIR) / name;
}

}  // namespace segmerge::testing
