#include "segmerge/seeding.hpp"

#include "segmerge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace segmerge {

DistanceMap::DistanceMap(Plane<std::uint64_t> squared) : squared_(std::move(squared)) {
    for (auto v : squared_.pixels()) max_squared_ = std::max(max_squared_, v);
}

double DistanceMap::at(int x, int y) const { return std::sqrt(static_cast<double>(squared_.at(x, y))); }
double DistanceMap::max() const { return std::sqrt(static_cast<double>(max_squared_)); }

// Meijster, Roerdink & Hesselink: a column scan for the vertical distance g,
// then a lower-envelope pass per row over parabolas (x - i)^2 + g(i)^2. All
// arithmetic is integral.
DistanceMap distance_transform(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    if (count_foreground(mask) == mask.size())
        throw DegenerateInputError("distance-transform", "mask has no background pixels");

    const std::int64_t inf = static_cast<std::int64_t>(w) + h;
    Plane<std::int64_t> g(w, h);
    for (int x = 0; x < w; ++x) {
        g.at(x, 0) = mask.at(x, 0) ? inf : 0;
        for (int y = 1; y < h; ++y) g.at(x, y) = mask.at(x, y) ? g.at(x, y - 1) + 1 : 0;
        for (int y = h - 2; y >= 0; --y)
            if (g.at(x, y + 1) < g.at(x, y)) g.at(x, y) = g.at(x, y + 1) + 1;
    }

    Plane<std::uint64_t> out(w, h);
    std::vector<std::int64_t> s(static_cast<std::size_t>(w)), t(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        const auto gy = g.row(y);
        auto f = [&](std::int64_t x, std::int64_t i) { return (x - i) * (x - i) + gy[i] * gy[i]; };
        auto sep = [&](std::int64_t i, std::int64_t u) {
            const std::int64_t num = u * u - i * i + gy[u] * gy[u] - gy[i] * gy[i];
            const std::int64_t den = 2 * (u - i);
            return num >= 0 ? num / den : -((-num + den - 1) / den);  // floor
        };
        std::int64_t q = 0;
        s[0] = 0;
        t[0] = 0;
        for (std::int64_t u = 1; u < w; ++u) {
            while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                const std::int64_t wpos = 1 + sep(s[q], u);
                if (wpos < w) {
                    ++q;
                    s[q] = u;
                    t[q] = wpos;
                }
            }
        }
        for (std::int64_t u = w - 1; u >= 0; --u) {
            out.at(static_cast<int>(u), y) = static_cast<std::uint64_t>(f(u, s[q]));
            if (u == t[q]) --q;
        }
    }
    return DistanceMap(std::move(out));
}

BinaryMask threshold_distance(const DistanceMap& dmap, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("distance fraction must lie in (0, 1)");
    if (dmap.max_squared() == 0)
        throw DegenerateInputError("distance-threshold", "distance map is all zero; no markers derivable");
    const double cut = fraction * dmap.max();
    BinaryMask out(dmap.width(), dmap.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::sqrt(static_cast<double>(dmap.squared()[i])) > cut ? 1 : 0;
    return out;
}

namespace {

struct DisjointSet {
    std::vector<std::uint32_t> parent;

    std::uint32_t make() {
        parent.push_back(static_cast<std::uint32_t>(parent.size()));
        return parent.back();
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

// Two-pass labeling. Provisional labels are merged with union-find keeping the
// smallest representative; since provisional labels are issued in scan order,
// the smallest provisional label of a component is its first-encountered pixel.
MarkerMap label_components(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    Plane<std::uint32_t> labels(w, h);
    DisjointSet sets;
    sets.make();  // 0 = background

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            std::uint32_t label = 0;
            // already-visited neighbors: W, NW, N, NE
            const int dx[4] = {-1, -1, 0, 1};
            const int dy[4] = {0, -1, -1, -1};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                if (!labels.contains(nx, ny)) continue;
                const std::uint32_t n = labels.at(nx, ny);
                if (n == 0) continue;
                if (label == 0)
                    label = n;
                else
                    sets.unite(label, n);
            }
            labels.at(x, y) = label != 0 ? label : sets.make();
        }
    }

    std::vector<std::uint32_t> final_id(sets.parent.size(), 0);
    std::uint32_t count = 0;
    for (std::uint32_t p = 1; p < sets.parent.size(); ++p) {
        const std::uint32_t root = sets.find(p);
        if (root == p) final_id[p] = ++count;
    }
    for (auto& v : labels.pixels())
        if (v != 0) v = final_id[sets.find(v)];
    return MarkerMap(std::move(labels), count);
}

MarkerSet generate_markers(const BinaryMask& opened, double fraction, bool with_background) {
    const BinaryMask fg = threshold_distance(distance_transform(opened), fraction);
    MarkerMap fg_markers = label_components(fg);
    if (fg_markers.count() == 0)
        throw DegenerateInputError("markers", "no foreground markers survived thresholding");
    const std::uint32_t k = fg_markers.count();
    if (!with_background) return {std::move(fg_markers), k, 0};

    const DistanceMap bg_distance = distance_transform(complement(opened));
    if (bg_distance.max_squared() == 0) return {std::move(fg_markers), k, 0};
    BinaryMask bg = threshold_distance(bg_distance, fraction);
    const int w = bg.width(), h = bg.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bg.at(x, y)) continue;
            bool touches = fg.at(x, y) != 0;
            for (int dy = -1; dy <= 1 && !touches; ++dy)
                for (int dx = -1; dx <= 1 && !touches; ++dx)
                    touches = fg.contains(x + dx, y + dy) && fg.at(x + dx, y + dy);
            if (touches) bg.at(x, y) = 0;
        }
    }
    const MarkerMap bg_markers = label_components(bg);

    Plane<std::uint32_t> labels = fg_markers.labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (bg_markers.labels()[i] != 0) labels[i] = k + bg_markers.labels()[i];
    return {MarkerMap(std::move(labels), k + bg_markers.count()), k, bg_markers.count()};
}

GrayImage render_distance(const DistanceMap& dmap) {
    GrayImage out(dmap.width(), dmap.height());
    const double mx = dmap.max();
    if (mx == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::lround(std::sqrt(static_cast<double>(dmap.squared()[i])) / mx * 255.0));
    return out;
}

}  // namespace segmerge
