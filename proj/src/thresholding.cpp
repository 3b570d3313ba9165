#include "segmerge/thresholding.hpp"

#include "segmerge/error.hpp"
#include "segmerge/kernels.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <vector>

namespace segmerge {

StructuringElement::StructuringElement(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0)
        throw std::invalid_argument("structuring element sides must be odd and positive");
}

IntensityHistogram intensity_histogram(const GrayImage& img) {
    IntensityHistogram hist{};
    for (auto v : img.pixels()) ++hist[v];
    return hist;
}

std::uint8_t otsu_threshold(const IntensityHistogram& hist) {
    std::uint64_t total = 0;
    std::uint64_t weighted = 0;
    int distinct = 0;
    for (int i = 0; i < 256; ++i) {
        total += hist[i];
        weighted += hist[i] * static_cast<std::uint64_t>(i);
        distinct += hist[i] != 0;
    }
    if (distinct < 2) throw DegenerateInputError("otsu", "image has a single intensity value");

    // Between-class variance is (s0 * n1 - s1 * n0)^2 / (N^2 * n0 * n1) with
    // s = intensity sums and n = pixel counts. Compare candidates as exact
    // fractions; the cross products need up to ~200 bits.
    using boost::multiprecision::uint256_t;
    std::uint64_t n0 = 0, s0 = 0;
    uint256_t best_num = 0, best_den = 1;
    int best = -1;
    for (int t = 0; t < 256; ++t) {
        n0 += hist[t];
        s0 += hist[t] * static_cast<std::uint64_t>(t);
        const std::uint64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const std::uint64_t s1 = weighted - s0;
        const uint256_t a = uint256_t(s0) * n1;
        const uint256_t b = uint256_t(s1) * n0;
        const uint256_t diff = a > b ? uint256_t(a - b) : uint256_t(b - a);
        const uint256_t num = diff * diff;
        const uint256_t den = uint256_t(n0) * n1;
        if (best < 0 || num * best_den > best_num * den) {
            best = t;
            best_num = num;
            best_den = den;
        }
    }
    return static_cast<std::uint8_t>(best);
}

std::uint8_t otsu_threshold(const GrayImage& img) { return otsu_threshold(intensity_histogram(img)); }

BinaryMask binarize(const GrayImage& img, std::uint8_t t) {
    BinaryMask mask(img.width(), img.height());
    kernels::active().threshold_gt(img.data(), mask.data(), img.size(), t);
    return mask;
}

namespace {

// Rectangle SEs are separable: a horizontal window pass then a vertical one.
template <bool Erode>
BinaryMask morph(const BinaryMask& mask, const StructuringElement& se) {
    const auto& k = kernels::active();
    const int w = mask.width(), h = mask.height();
    const auto rx = static_cast<std::size_t>(se.radius_x());
    const int ry = se.radius_y();

    BinaryMask horizontal(w, h);
    for (int y = 0; y < h; ++y) {
        auto* out = horizontal.row(y).data();
        if (Erode)
            k.window_min(mask.row(y).data(), out, static_cast<std::size_t>(w), rx);
        else
            k.window_max(mask.row(y).data(), out, static_cast<std::size_t>(w), rx);
    }

    BinaryMask result(w, h);
    std::vector<const std::uint8_t*> rows;
    for (int y = 0; y < h; ++y) {
        const int lo = y - ry, hi = y + ry;
        if (Erode && (lo < 0 || hi >= h)) continue;  // window leaves the image: background
        rows.clear();
        for (int yy = std::max(lo, 0); yy <= std::min(hi, h - 1); ++yy) rows.push_back(horizontal.row(yy).data());
        if (Erode)
            k.rows_min(rows.data(), rows.size(), result.row(y).data(), static_cast<std::size_t>(w));
        else
            k.rows_max(rows.data(), rows.size(), result.row(y).data(), static_cast<std::size_t>(w));
    }
    return result;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) { return morph<true>(mask, se); }
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) { return morph<false>(mask, se); }

BinaryMask open(const BinaryMask& mask, const StructuringElement& se, int iterations) {
    if (iterations < 1) throw std::invalid_argument("opening needs at least one iteration");
    BinaryMask m = mask;
    for (int i = 0; i < iterations; ++i) m = erode(m, se);
    for (int i = 0; i < iterations; ++i) m = dilate(m, se);
    return m;
}

BinaryMask complement(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    std::transform(mask.pixels().begin(), mask.pixels().end(), out.pixels().begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v ? 0 : 1; });
    return out;
}

std::size_t count_foreground(const BinaryMask& mask) {
    return static_cast<std::size_t>(std::count_if(mask.pixels().begin(), mask.pixels().end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

}  // namespace segmerge
