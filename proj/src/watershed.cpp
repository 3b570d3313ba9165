#include "segmerge/watershed.hpp"

#include "segmerge/error.hpp"
#include "segmerge/image_io.hpp"
#include "segmerge/kernels.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace segmerge {

ElevationMap gradient_magnitude(const GrayImage& img) {
    const auto& k = kernels::active();
    const int w = img.width(), h = img.height();
    ElevationMap out(w, h);
    for (int y = 0; y < h; ++y) {
        const auto* above = img.row(y == 0 ? 0 : y - 1).data();
        const auto* below = img.row(y + 1 == h ? y : y + 1).data();
        k.sobel_row(above, img.row(y).data(), below, out.row(y).data(), static_cast<std::size_t>(w));
    }
    return out;
}

ElevationMap intensity_elevation(const GrayImage& img) {
    ElevationMap out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i];
    return out;
}

namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

struct FrontierEntry {
    float elevation;
    std::uint64_t order;
    std::uint32_t index;

    // std::priority_queue is a max-heap; invert so the lowest (elevation, order) is on top.
    bool operator<(const FrontierEntry& o) const noexcept {
        if (elevation != o.elevation) return elevation > o.elevation;
        return order > o.order;
    }
};

}  // namespace

LabelMap watershed_flood(const ElevationMap& elevation, const MarkerMap& markers) {
    if (!elevation.same_shape(markers.width(), markers.height()))
        throw std::invalid_argument("elevation and marker maps differ in size");
    if (markers.count() == 0) throw DegenerateInputError("watershed", "no markers to flood from");
    for (float v : elevation.pixels())
        if (!std::isfinite(v) || v < 0.0f) throw std::invalid_argument("elevation must be finite and non-negative");

    const int w = elevation.width(), h = elevation.height();
    LabelMap labels(w, h, kUnassigned);
    std::vector<std::uint8_t> queued(labels.size(), 0);
    std::priority_queue<FrontierEntry> frontier;
    std::uint64_t order = 0;

    auto push_neighbors = [&](int x, int y) {
        for (const auto [dx, dy] : kNeighborOffsets) {
            const int nx = x + dx, ny = y + dy;
            if (!labels.contains(nx, ny)) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (queued[n] || labels[n] != kUnassigned) continue;
            queued[n] = 1;
            frontier.push({elevation[n], order++, static_cast<std::uint32_t>(n)});
        }
    };

    for (std::size_t i = 0; i < labels.size(); ++i)
        if (markers.labels()[i] != 0) labels[i] = markers.labels()[i];
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (markers.at(x, y) != 0) push_neighbors(x, y);

    while (!frontier.empty()) {
        const std::uint32_t p = frontier.top().index;
        frontier.pop();
        const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
        const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));

        std::uint32_t basin = kUnassigned;
        bool conflict = false;
        for (const auto [dx, dy] : kNeighborOffsets) {
            if (!labels.contains(x + dx, y + dy)) continue;
            const std::uint32_t n = labels.at(x + dx, y + dy);
            if (n == kUnassigned || n == kBoundaryLabel) continue;
            if (basin == kUnassigned)
                basin = n;
            else if (n != basin)
                conflict = true;
        }
        if (conflict || basin == kUnassigned) {
            labels[p] = kBoundaryLabel;
            continue;
        }
        labels[p] = basin;
        push_neighbors(x, y);
    }

    for (auto& v : labels.pixels())
        if (v == kUnassigned) v = kBoundaryLabel;
    return labels;
}

Rgb label_color(std::uint32_t id, std::uint64_t seed) noexcept {
    // Composition of bijections on 24-bit integers that each fix 0.
    constexpr std::uint32_t mask = 0xFFFFFF;
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ull;
    s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ull;
    s = (s ^ (s >> 27)) * 0x94D049BB133111EBull;
    s ^= s >> 31;
    const std::uint32_t mult = (static_cast<std::uint32_t>(s) | 1u) & mask;

    std::uint32_t x = id & mask;
    x = (x * 0x9E3779u) & mask;
    x ^= x >> 12;
    x = (x * mult) & mask;
    x ^= x >> 11;
    x = (x * 0x2C1B3Du) & mask;
    x ^= x >> 13;
    return {static_cast<std::uint8_t>(x >> 16), static_cast<std::uint8_t>(x >> 8), static_cast<std::uint8_t>(x)};
}

RgbImage render_labels(const LabelMap& labels, std::uint64_t seed) {
    RgbImage out(labels.width(), labels.height());
    std::uint32_t last_id = kBoundaryLabel;
    Rgb last = kBoundaryColor;
    for (int y = 0; y < labels.height(); ++y) {
        for (int x = 0; x < labels.width(); ++x) {
            const std::uint32_t id = labels.at(x, y);
            if (id != last_id) {
                last_id = id;
                last = id == kBoundaryLabel ? kBoundaryColor : label_color(id, seed);
            }
            out.set(x, y, last);
        }
    }
    return out;
}

std::map<std::uint32_t, std::size_t> label_areas(const LabelMap& labels) {
    std::map<std::uint32_t, std::size_t> areas;
    for (auto v : labels.pixels()) ++areas[v];
    return areas;
}

void save_label_map(const LabelMap& labels, const std::filesystem::path& path) {
    Plane<std::uint16_t> raw(labels.width(), labels.height());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 0xFFFF) throw std::out_of_range("label id exceeds 16-bit range");
        raw[i] = static_cast<std::uint16_t>(labels[i]);
    }
    save_gray16_png(raw, path);
}

LabelMap load_label_map(const std::filesystem::path& path) {
    const auto raw = load_gray16_png(path);
    LabelMap labels(raw.width(), raw.height());
    for (std::size_t i = 0; i < raw.size(); ++i) labels[i] = raw[i];
    return labels;
}

}  // namespace segmerge
