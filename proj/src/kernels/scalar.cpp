#include "segmerge/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace segmerge::kernels::scalar {
namespace {

void luma_rgb(const std::uint8_t* rgb, std::uint8_t* gray, std::size_t pixels) {
    for (std::size_t i = 0; i < pixels; ++i, rgb += 3) {
        const std::uint32_t sum = 299u * rgb[0] + 587u * rgb[1] + 114u * rgb[2] + 500u;
        gray[i] = static_cast<std::uint8_t>(sum / 1000u);
    }
}

void sobel_row(const std::uint8_t* a, const std::uint8_t* m, const std::uint8_t* b, float* out,
               std::size_t width) {
    for (std::size_t x = 0; x < width; ++x) {
        const std::size_t l = x == 0 ? 0 : x - 1;
        const std::size_t r = x + 1 == width ? x : x + 1;
        const std::int32_t gx = (a[r] + 2 * m[r] + b[r]) - (a[l] + 2 * m[l] + b[l]);
        const std::int32_t gy = (b[l] + 2 * b[x] + b[r]) - (a[l] + 2 * a[x] + a[r]);
        out[x] = std::sqrt(static_cast<float>(gx * gx + gy * gy));
    }
}

void threshold_gt(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::uint8_t t) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > t ? 1 : 0;
}

void rows_min(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out, std::size_t n) {
    std::copy_n(rows[0], n, out);
    for (std::size_t k = 1; k < count; ++k)
        for (std::size_t i = 0; i < n; ++i) out[i] = std::min(out[i], rows[k][i]);
}

void rows_max(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out, std::size_t n) {
    std::copy_n(rows[0], n, out);
    for (std::size_t k = 1; k < count; ++k)
        for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], rows[k][i]);
}

void window_min(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i < radius || i + radius >= n) {
            out[i] = 0;
            continue;
        }
        std::uint8_t v = in[i - radius];
        for (std::size_t j = i - radius + 1; j <= i + radius; ++j) v = std::min(v, in[j]);
        out[i] = v;
    }
}

void window_max(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i < radius ? 0 : i - radius;
        const std::size_t hi = std::min(n - 1, i + radius);
        std::uint8_t v = in[lo];
        for (std::size_t j = lo + 1; j <= hi; ++j) v = std::max(v, in[j]);
        out[i] = v;
    }
}

}  // namespace

const KernelTable kTable{Isa::scalar, luma_rgb,   sobel_row,  threshold_gt,
                         rows_min,    rows_max,   window_min, window_max};

}  // namespace segmerge::kernels::scalar
