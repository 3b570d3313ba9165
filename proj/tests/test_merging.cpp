#include "segmerge/error.hpp"
#include "segmerge/merging.hpp"
#include "segmerge/seeding.hpp"
#include "segmerge/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace segmerge;

namespace {

// Watershed of a random image from random seeds: a realistic label map.
LabelMap random_segmentation(std::mt19937& rng, int w, int h, int markers) {
    Plane<std::uint32_t> ids(w, h);
    std::uniform_int_distribution<int> xs(0, w - 1), ys(0, h - 1);
    std::uint32_t next = 1;
    for (int i = 0; i < markers; ++i) {
        const int x = xs(rng), y = ys(rng);
        if (!ids.at(x, y)) ids.at(x, y) = next++;
    }
    const GrayImage g = testing::random_gray(rng, w, h, 6);
    return watershed_flood(gradient_magnitude(g), MarkerMap(ids, next - 1));
}

Histogram2D tally(const HsPixelPlane& hs, const LabelMap& labels, std::uint32_t id, int hb, int sb) {
    Histogram2D h(hb, sb);
    for (int y = 0; y < labels.height(); ++y)
        for (int x = 0; x < labels.width(); ++x) {
            if (labels.at(x, y) != id) continue;
            const double hue = hs.hue.at(x, y), sat = hs.saturation.at(x, y);
            int bh = static_cast<int>(std::floor(hue / (360.0 / hb)));
            int bs = static_cast<int>(std::floor(sat * sb));
            bh = std::min(bh, hb - 1);
            bs = std::min(bs, sb - 1);
            h.at(bh, bs) += 1.0;
        }
    return h;
}

Histogram2D from_weights(std::vector<double> w) {
    Histogram2D h(1, static_cast<int>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) h.at(0, static_cast<int>(i)) = w[i];
    return h;
}

std::map<std::uint32_t, std::uint32_t> replay(const std::vector<MergeStep>& log) {
    std::map<std::uint32_t, std::uint32_t> parent;
    auto find = [&](std::uint32_t x) {
        while (parent.contains(x)) x = parent[x];
        return x;
    };
    for (const auto& s : log) parent[find(s.absorbed)] = find(s.survivor);
    std::map<std::uint32_t, std::uint32_t> out;
    for (const auto& [k, v] : parent) out[k] = find(k);
    return out;
}

std::size_t graph_components(const RegionAdjacencyGraph& rag) {
    std::map<std::uint32_t, std::uint32_t> parent;
    for (const auto& [id, node] : rag.nodes) parent[id] = id;
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    for (const auto& [key, d] : rag.edges) parent[find(key.first)] = find(key.second);
    std::size_t n = 0;
    for (const auto& [id, p] : parent) n += id == p;
    return n;
}

}  // namespace

TEST_CASE("segment histogram examples") {
    RgbImage red(4, 4, Rgb{255, 0, 0});
    const LabelMap ones(4, 4, 1);
    const Histogram2D h = segment_histogram(to_hue_saturation(red), ones, 1, 30, 32);
    CHECK(h.at(0, 31) == 16.0);
    CHECK(h.total_pixels() == 16);
    const Histogram2D n = normalize(h);
    CHECK(n.at(0, 31) == 1.0);

    RgbImage half(2, 2, Rgb{255, 0, 0});
    half.set(1, 0, {0, 255, 0});
    half.set(1, 1, {0, 255, 0});
    const Histogram2D hh = normalize(segment_histogram(to_hue_saturation(half), LabelMap(2, 2, 1), 1, 30, 32));
    CHECK(hh.at(0, 31) == 0.5);
    CHECK(hh.at(10, 31) == 0.5);

    CHECK_THROWS_AS(segment_histogram(to_hue_saturation(red), ones, kBoundaryLabel, 30, 32), std::invalid_argument);
    CHECK_THROWS_AS(segment_histogram(to_hue_saturation(red), ones, 2, 30, 32), std::invalid_argument);
}

TEST_CASE("segment histograms match a direct tally") {
    std::mt19937 rng(31);
    for (int i = 0; i < 30; ++i) {
        const RgbImage img = testing::random_rgb(rng, 16, 16);
        const LabelMap labels = random_segmentation(rng, 16, 16, 4);
        const HsPixelPlane hs = to_hue_saturation(img);
        const auto all = segment_histograms(hs, labels, 30, 32);
        for (const auto& [id, h] : all) {
            const Histogram2D want = tally(hs, labels, id, 30, 32);
            for (std::size_t b = 0; b < h.bin_count(); ++b) REQUIRE(h.weights()[b] == want.weights()[b]);
            REQUIRE(h == segment_histogram(hs, labels, id, 30, 32));
        }
    }
}

TEST_CASE("bin helpers clamp the top edge") {
    CHECK(hue_bin(0.0, 30) == 0);
    CHECK(hue_bin(11.99, 30) == 0);
    CHECK(hue_bin(12.0, 30) == 1);
    CHECK(hue_bin(359.999, 30) == 29);
    CHECK(saturation_bin(1.0, 32) == 31);
    CHECK(saturation_bin(0.0, 32) == 0);
}

TEST_CASE("normalize") {
    Histogram2D one(3, 3);
    one.at(1, 2) = 7.0;
    CHECK(normalize(one).at(1, 2) == 1.0);

    const Histogram2D pair = normalize(from_weights({3, 1}));
    CHECK(pair.at(0, 0) == 0.75);
    CHECK(pair.at(0, 1) == 0.25);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 20; ++i) {
        Histogram2D h(5, 4);
        for (auto& w : h.weights()) w = std::floor(u(rng));
        h.at(0, 0) += 1.0;
        const Histogram2D n1 = normalize(h), n2 = normalize(n1);
        for (std::size_t b = 0; b < h.bin_count(); ++b) CHECK(n1.weights()[b] == doctest::Approx(n2.weights()[b]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(normalize(Histogram2D(2, 2)), DegenerateInputError);
}

TEST_CASE("bhattacharyya distance") {
    const auto a = from_weights({1, 0});
    const auto b = from_weights({0.5, 0.5});
    CHECK(bhattacharyya_distance(a, a) == 0.0);
    CHECK(bhattacharyya_distance(a, from_weights({0, 1})) == 1.0);
    CHECK(bhattacharyya_distance(a, b) == doctest::Approx(std::sqrt(1.0 - std::sqrt(0.5))).epsilon(1e-12));
    CHECK(std::abs(bhattacharyya_distance(a, b) - 0.5412) < 1e-4);
    CHECK_THROWS_AS(bhattacharyya_distance(a, Histogram2D(2, 2)), std::invalid_argument);

    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Histogram2D x(6, 5), y(6, 5);
        for (auto& w : x.weights()) w = u(rng) < 0.4 ? u(rng) : 0.0;
        for (auto& w : y.weights()) w = u(rng) < 0.4 ? u(rng) : 0.0;
        x.at(0, 0) += 0.01;
        y.at(5, 4) += 0.01;
        const auto nx = normalize(x), ny = normalize(y);
        const double d = bhattacharyya_distance(nx, ny);
        CHECK(d == bhattacharyya_distance(ny, nx));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(bhattacharyya_distance(nx, nx) <= 1e-9);
    }
}

TEST_CASE("adjacency graph examples") {
    const RgbImage img(6, 6, Rgb{10, 200, 30});
    const auto hs = to_hue_saturation(img);

    const auto single = build_rag(LabelMap(6, 6, 1), hs, 30, 32);
    CHECK(single.nodes.size() == 1);
    CHECK(single.edges.empty());

    LabelMap split(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) split.at(x, y) = x < 3 ? 1 : (x == 3 ? 0 : 2);
    const auto two = build_rag(split, hs, 30, 32);
    CHECK(two.edges.size() == 1);
    CHECK(two.has_edge(2, 1));
    CHECK(two.nodes.at(1).area == 18);

    LabelMap quads(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) quads.at(x, y) = 1 + (x >= 3) + 2 * (y >= 3);
    const auto four = build_rag(quads, hs, 30, 32);
    CHECK(four.nodes.size() == 4);
    CHECK(four.edges.size() == 6);
    CHECK(adjacent_pairs(quads) == oracle::adjacency(quads));
}

TEST_CASE("adjacency matches the all-pairs scan") {
    std::mt19937 rng(8);
    for (int i = 0; i < 60; ++i) {
        const LabelMap labels = random_segmentation(rng, 12, 10, 6);
        REQUIRE(adjacent_pairs(labels) == oracle::adjacency(labels));
    }
}

TEST_CASE("merging at the extremes") {
    std::mt19937 rng(19);
    for (int i = 0; i < 20; ++i) {
        const RgbImage img = testing::random_rgb(rng, 20, 20);
        const LabelMap labels = random_segmentation(rng, 20, 20, 6);
        const auto rag = build_rag(labels, to_hue_saturation(img), 30, 32);

        const MergeResult none = merge_segments(rag, labels, 0.0);
        CHECK(none.merge_log.empty());
        CHECK(none.final_count == none.initial_count);
        CHECK(none.final_labels == labels);

        const MergeResult all = merge_segments(rag, labels, 1.01);
        CHECK(all.final_count == graph_components(rag));
        if (graph_components(rag) == 1) {
            std::set<std::uint32_t> ids;
            for (auto v : all.final_labels.pixels()) ids.insert(v);
            CHECK(ids == std::set<std::uint32_t>{1});
        }
    }
    CHECK_THROWS_AS(merge_segments(RegionAdjacencyGraph{}, LabelMap(1, 1, 1), -0.5), std::invalid_argument);
    CHECK_THROWS_AS(merge_segments(RegionAdjacencyGraph{}, LabelMap(1, 1, 1), std::nan("")), std::invalid_argument);
}

TEST_CASE("merged histograms equal recounts over the union") {
    std::mt19937 rng(23);
    for (int i = 0; i < 50; ++i) {
        const RgbImage img = testing::random_rgb(rng, 24, 24);
        const LabelMap labels = random_segmentation(rng, 24, 24, 8);
        const auto hs = to_hue_saturation(img);
        const auto rag = build_rag(labels, hs, 30, 32);
        const MergeResult r = merge_segments(rag, labels, 0.9);
        const auto root = replay(r.merge_log);

        LabelMap united = labels;
        for (auto& v : united.pixels())
            if (root.contains(v)) v = root.at(v);
        std::map<std::uint32_t, Histogram2D> summed;
        for (const auto& [id, node] : rag.nodes) {
            const auto to = root.contains(id) ? root.at(id) : id;
            if (!summed.contains(to)) summed.emplace(to, Histogram2D(30, 32));
            summed.at(to) += node.histogram;
        }
        for (const auto& [id, h] : summed) {
            const Histogram2D recount = tally(hs, united, id, 30, 32);
            REQUIRE(h.weights().size() == recount.weights().size());
            const auto a = normalize(h), b = normalize(recount);
            for (std::size_t k = 0; k < a.bin_count(); ++k) REQUIRE(a.weights()[k] == b.weights()[k]);
        }
    }
}

TEST_CASE("merging conserves labels and is monotone in the threshold") {
    std::mt19937 rng(29);
    for (int i = 0; i < 15; ++i) {
        const RgbImage img = synthetic::random_blobs(static_cast<std::uint64_t>(i), 48, 48);
        const LabelMap labels = random_segmentation(rng, 48, 48, 12);
        const auto rag = build_rag(labels, to_hue_saturation(img), 30, 32);
        std::uint32_t previous = rag.nodes.size() + 1;
        for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 1.01}) {
            const MergeResult r = merge_segments(rag, labels, t);
            CHECK(r.final_count <= previous);
            CHECK(r.final_count == r.initial_count - r.merge_log.size());
            previous = r.final_count;

            const auto root = replay(r.merge_log);
            std::set<std::uint32_t> final_ids;
            for (std::size_t p = 0; p < labels.size(); ++p) {
                const auto orig = labels[p], now = r.final_labels[p];
                if (orig != kBoundaryLabel)
                    REQUIRE(now == (root.contains(orig) ? root.at(orig) : orig));
                if (now != kBoundaryLabel) final_ids.insert(now);
            }
            CHECK(final_ids.size() == r.final_count);
        }
    }
}

TEST_CASE("interior boundaries dissolve") {
    LabelMap m(5, 3, 1);
    m.at(2, 0) = m.at(2, 1) = m.at(2, 2) = kBoundaryLabel;
    LabelMap same = m;
    dissolve_interior_boundaries(same);
    for (auto v : same.pixels()) CHECK(v == 1u);

    for (int y = 0; y < 3; ++y)
        for (int x = 3; x < 5; ++x) m.at(x, y) = 2;
    LabelMap kept = m;
    dissolve_interior_boundaries(kept);
    CHECK(kept == m);
}
