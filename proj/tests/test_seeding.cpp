#include "segmerge/error.hpp"
#include "segmerge/seeding.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace segmerge;

namespace {

std::set<std::set<std::size_t>> partition(const MarkerMap& m) {
    std::map<std::uint32_t, std::set<std::size_t>> by_id;
    for (std::size_t i = 0; i < m.labels().size(); ++i)
        if (m.labels()[i]) by_id[m.labels()[i]].insert(i);
    std::set<std::set<std::size_t>> out;
    for (auto& [id, px] : by_id) out.insert(px);
    return out;
}

void check_lipschitz(const DistanceMap& d) {
    const double slack = 1e-12;
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dy == 0 && dx <= 0) || x + dx < 0 || x + dx >= d.width() || y + dy >= d.height()) continue;
                    const double step = std::sqrt(static_cast<double>(dx * dx + dy * dy));
                    REQUIRE(std::fabs(d.at(x, y) - d.at(x + dx, y + dy)) <= step + slack);
                }
}

}  // namespace

TEST_CASE("distance transform examples") {
    BinaryMask single(5, 5);
    single.at(2, 2) = 1;
    const DistanceMap d1 = distance_transform(single);
    CHECK(d1.at(2, 2) == 1.0);
    CHECK(d1.max_squared() == 1);
    CHECK(d1.at(0, 0) == 0.0);

    BinaryMask block(7, 7);
    for (int y = 2; y < 5; ++y)
        for (int x = 2; x < 5; ++x) block.at(x, y) = 1;
    const DistanceMap d2 = distance_transform(block);
    const auto want = oracle::squared_distance(block);
    CHECK(want.at(3, 3) == 4);
    CHECK(want.at(3, 2) == 1);
    CHECK(want.at(2, 2) == 1);
    CHECK(d2.squared() == want);
    CHECK(d2.at(3, 3) == 2.0);

    const DistanceMap d3 = distance_transform(BinaryMask(4, 6));
    CHECK(d3.max_squared() == 0);

    CHECK_THROWS_AS(distance_transform(BinaryMask(3, 3, 1)), DegenerateInputError);
}

TEST_CASE("distance transform is exact and 1-Lipschitz") {
    std::mt19937 rng(314);
    std::uniform_int_distribution<int> dim(1, 40);
    std::uniform_real_distribution<double> density(0.3, 0.99);
    int checked = 0;
    while (checked < 60) {
        const BinaryMask m = testing::random_mask(rng, dim(rng), dim(rng), density(rng));
        if (count_foreground(m) == m.size()) continue;
        const DistanceMap d = distance_transform(m);
        REQUIRE(d.squared() == oracle::squared_distance(m));
        check_lipschitz(d);
        ++checked;
    }
}

TEST_CASE("distance transform on long thin and single-background masks") {
    BinaryMask row(50, 1, 1);
    row.at(0, 0) = 0;
    const DistanceMap d = distance_transform(row);
    CHECK(d.squared_at(49, 0) == 49u * 49u);
    BinaryMask col(1, 37, 1);
    col.at(0, 36) = 0;
    CHECK(distance_transform(col).squared() == oracle::squared_distance(col));
    BinaryMask corner(30, 20, 1);
    corner.at(29, 19) = 0;
    CHECK(distance_transform(corner).squared() == oracle::squared_distance(corner));
}

TEST_CASE("threshold_distance examples") {
    BinaryMask disk(15, 15);
    for (int y = 0; y < 15; ++y)
        for (int x = 0; x < 15; ++x) disk.at(x, y) = (x - 7) * (x - 7) + (y - 7) * (y - 7) <= 30;
    const DistanceMap d = distance_transform(disk);
    const BinaryMask top = threshold_distance(d, 0.999);
    for (std::size_t i = 0; i < top.size(); ++i) CHECK(top[i] == (d.squared()[i] == d.max_squared()));

    // Two 5x5 blocks joined by a one-pixel bridge.
    BinaryMask pair(17, 9);
    for (int y = 2; y < 7; ++y)
        for (int x = 1; x < 6; ++x) pair.at(x, y) = pair.at(x + 10, y) = 1;
    for (int x = 6; x < 11; ++x) pair.at(x, 4) = 1;
    const BinaryMask split = threshold_distance(distance_transform(pair), 0.5);
    CHECK(oracle::components(pair).size() == 1);
    CHECK(oracle::components(split).size() == 2);
    CHECK(label_components(split).count() == 2);

    // 7x7 block: max distance 4, fraction 0.5 keeps distance > 2.
    BinaryMask b4(9, 9);
    for (int y = 1; y < 8; ++y)
        for (int x = 1; x < 8; ++x) b4.at(x, y) = 1;
    const DistanceMap d4 = distance_transform(b4);
    REQUIRE(d4.max() == 4.0);
    const BinaryMask half = threshold_distance(d4, 0.5);
    for (std::size_t i = 0; i < half.size(); ++i) CHECK(half[i] == (d4.squared()[i] > 4));

    CHECK_THROWS_AS(threshold_distance(distance_transform(BinaryMask(3, 3)), 0.5), DegenerateInputError);
    CHECK_THROWS_AS(threshold_distance(d4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_distance(d4, 0.0), std::invalid_argument);
}

TEST_CASE("threshold_distance is nested in the fraction") {
    std::mt19937 rng(15);
    for (int i = 0; i < 20; ++i) {
        BinaryMask m = testing::random_blobby_mask(rng, 32, 32, 0.6);
        m.at(0, 0) = 0;
        const DistanceMap d = distance_transform(m);
        if (d.max_squared() == 0) continue;
        BinaryMask prev = threshold_distance(d, 0.05);
        for (double f = 0.1; f < 1.0; f += 0.1) {
            const BinaryMask cur = threshold_distance(d, f);
            REQUIRE(testing::subset(cur, prev));
            prev = cur;
        }
    }
}

TEST_CASE("component labeling examples") {
    const MarkerMap empty = label_components(BinaryMask(4, 4));
    CHECK(empty.count() == 0);

    BinaryMask diag(3, 3);
    diag.at(0, 0) = diag.at(1, 1) = 1;
    CHECK(label_components(diag).count() == 1);

    // Row-major first-encounter numbering; a U shape merges late.
    BinaryMask u(5, 4);
    u.at(4, 0) = 1;
    u.at(0, 1) = u.at(2, 1) = 1;
    u.at(0, 2) = u.at(2, 2) = 1;
    u.at(0, 3) = u.at(1, 3) = u.at(2, 3) = 1;
    const MarkerMap m = label_components(u);
    CHECK(m.count() == 2);
    CHECK(m.at(4, 0) == 1);
    CHECK(m.at(0, 1) == 2);
    CHECK(m.at(2, 1) == 2);
}

TEST_CASE("component labeling matches the flood-fill oracle") {
    std::mt19937 rng(5150);
    for (int i = 0; i < 100; ++i) {
        const BinaryMask mask = testing::random_mask(rng, 32, 32, 0.1 + 0.008 * i);
        const MarkerMap m = label_components(mask);
        const auto want = oracle::components(mask);
        REQUIRE(partition(m) == want);
        REQUIRE(m.count() == want.size());
        // ids appear in row-major order of first pixel
        std::uint32_t next = 1;
        for (auto v : m.labels().pixels()) {
            if (v == 0) continue;
            REQUIRE(v <= next);
            if (v == next) ++next;
        }
    }
}

TEST_CASE("background markers follow foreground markers") {
    BinaryMask opened(40, 20);
    for (int y = 5; y < 15; ++y)
        for (int x = 15; x < 25; ++x) opened.at(x, y) = 1;
    const MarkerSet fg_only = generate_markers(opened, 0.5, false);
    CHECK(fg_only.foreground_count == 1);
    CHECK(fg_only.background_count == 0);

    const MarkerSet both = generate_markers(opened, 0.5, true);
    CHECK(both.foreground_count == 1);
    CHECK(both.background_count == 2);  // left and right of the block
    CHECK(both.markers.count() == 3);
    CHECK(both.markers.at(20, 10) == 1);
    CHECK(both.markers.at(0, 10) == 2);
    CHECK(both.markers.at(39, 10) == 3);
    // Background markers never sit on or touch foreground markers.
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 40; ++x) {
            if (both.markers.at(x, y) <= 1) continue;
            CHECK(opened.at(x, y) == 0);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (opened.contains(x + dx, y + dy)) CHECK(both.markers.at(x + dx, y + dy) != 1);
        }

    CHECK_THROWS_AS(generate_markers(BinaryMask(8, 8), 0.5, true), DegenerateInputError);
}

TEST_CASE("distance rendering maps the maximum to white") {
    BinaryMask b(9, 9);
    for (int y = 1; y < 8; ++y)
        for (int x = 1; x < 8; ++x) b.at(x, y) = 1;
    const GrayImage g = render_distance(distance_transform(b));
    CHECK(g.at(4, 4) == 255);
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 1) == 64);  // 1/4 of 255 = 63.75
}
