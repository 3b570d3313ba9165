#include "segmerge/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#define SEGMERGE_AVX2 __attribute__((target("avx2")))

namespace segmerge::kernels::avx2 {
namespace {

const KernelTable& ref = scalar::kTable;

// floor(x / 1000) == ((x >> 3) * 33555) >> 22 for 0 <= x <= 255500.
SEGMERGE_AVX2 void luma_rgb(const std::uint8_t* rgb, std::uint8_t* gray, std::size_t pixels) {
    const __m256i lane = _mm256_setr_epi32(0, 3, 6, 9, 12, 15, 18, 21);
    const __m256i byte = _mm256_set1_epi32(0xFF);
    const __m256i wr = _mm256_set1_epi32(299);
    const __m256i wg = _mm256_set1_epi32(587);
    const __m256i wb = _mm256_set1_epi32(114);
    const __m256i half = _mm256_set1_epi32(500);
    const __m256i magic = _mm256_set1_epi32(33555);
    const __m256i pick = _mm256_setr_epi32(0, 4, 0, 0, 0, 0, 0, 0);

    std::size_t i = 0;
    // Each gather reads 4 bytes per pixel, so stop one pixel short of the end.
    for (; i + 8 < pixels; i += 8) {
        const __m256i v = _mm256_i32gather_epi32(reinterpret_cast<const int*>(rgb + 3 * i), lane, 1);
        const __m256i r = _mm256_and_si256(v, byte);
        const __m256i g = _mm256_and_si256(_mm256_srli_epi32(v, 8), byte);
        const __m256i b = _mm256_and_si256(_mm256_srli_epi32(v, 16), byte);
        __m256i sum = _mm256_add_epi32(_mm256_mullo_epi32(r, wr), _mm256_mullo_epi32(g, wg));
        sum = _mm256_add_epi32(sum, _mm256_add_epi32(_mm256_mullo_epi32(b, wb), half));
        const __m256i q = _mm256_srli_epi32(_mm256_mullo_epi32(_mm256_srli_epi32(sum, 3), magic), 22);
        __m256i packed = _mm256_packus_epi32(q, q);
        packed = _mm256_packus_epi16(packed, packed);
        packed = _mm256_permutevar8x32_epi32(packed, pick);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(gray + i), _mm256_castsi256_si128(packed));
    }
    ref.luma_rgb(rgb + 3 * i, gray + i, pixels - i);
}

inline float sobel_at(const std::uint8_t* a, const std::uint8_t* m, const std::uint8_t* b,
                      std::size_t x, std::size_t width) {
    const std::size_t l = x == 0 ? 0 : x - 1;
    const std::size_t r = x + 1 == width ? x : x + 1;
    const std::int32_t gx = (a[r] + 2 * m[r] + b[r]) - (a[l] + 2 * m[l] + b[l]);
    const std::int32_t gy = (b[l] + 2 * b[x] + b[r]) - (a[l] + 2 * a[x] + a[r]);
    return std::sqrt(static_cast<float>(gx * gx + gy * gy));
}

SEGMERGE_AVX2 inline __m256i load8(const std::uint8_t* p) {
    return _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

SEGMERGE_AVX2 void sobel_row(const std::uint8_t* a, const std::uint8_t* m, const std::uint8_t* b,
                             float* out, std::size_t width) {
    out[0] = sobel_at(a, m, b, 0, width);
    std::size_t x = 1;
    for (; x + 8 < width; x += 8) {
        const __m256i al = load8(a + x - 1), ac = load8(a + x), ar = load8(a + x + 1);
        const __m256i ml = load8(m + x - 1), mr = load8(m + x + 1);
        const __m256i bl = load8(b + x - 1), bc = load8(b + x), br = load8(b + x + 1);
        const __m256i right = _mm256_add_epi32(_mm256_add_epi32(ar, br), _mm256_slli_epi32(mr, 1));
        const __m256i left = _mm256_add_epi32(_mm256_add_epi32(al, bl), _mm256_slli_epi32(ml, 1));
        const __m256i down = _mm256_add_epi32(_mm256_add_epi32(bl, br), _mm256_slli_epi32(bc, 1));
        const __m256i up = _mm256_add_epi32(_mm256_add_epi32(al, ar), _mm256_slli_epi32(ac, 1));
        const __m256i gx = _mm256_sub_epi32(right, left);
        const __m256i gy = _mm256_sub_epi32(down, up);
        const __m256i sq = _mm256_add_epi32(_mm256_mullo_epi32(gx, gx), _mm256_mullo_epi32(gy, gy));
        _mm256_storeu_ps(out + x, _mm256_sqrt_ps(_mm256_cvtepi32_ps(sq)));
    }
    for (; x < width; ++x) out[x] = sobel_at(a, m, b, x, width);
}

SEGMERGE_AVX2 void threshold_gt(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::uint8_t t) {
    const __m256i flip = _mm256_set1_epi8(static_cast<char>(0x80));
    const __m256i level = _mm256_set1_epi8(static_cast<char>(t ^ 0x80));
    const __m256i one = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i)), flip);
        const __m256i gt = _mm256_and_si256(_mm256_cmpgt_epi8(v, level), one);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), gt);
    }
    ref.threshold_gt(in + i, out + i, n - i, t);
}

template <bool Min>
SEGMERGE_AVX2 void rows_reduce(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out,
                               std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows[0] + i));
        for (std::size_t k = 1; k < count; ++k) {
            const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows[k] + i));
            acc = Min ? _mm256_min_epu8(acc, v) : _mm256_max_epu8(acc, v);
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), acc);
    }
    for (; i < n; ++i) {
        std::uint8_t v = rows[0][i];
        for (std::size_t k = 1; k < count; ++k) v = Min ? std::min(v, rows[k][i]) : std::max(v, rows[k][i]);
        out[i] = v;
    }
}

SEGMERGE_AVX2 void rows_min(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out,
                            std::size_t n) {
    rows_reduce<true>(rows, count, out, n);
}

SEGMERGE_AVX2 void rows_max(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out,
                            std::size_t n) {
    rows_reduce<false>(rows, count, out, n);
}

// Interior positions [radius, n - radius) have the full window inside the row.
template <bool Min>
SEGMERGE_AVX2 std::size_t window_interior(const std::uint8_t* in, std::uint8_t* out, std::size_t n,
                                          std::size_t radius) {
    std::size_t i = radius;
    if (n < 2 * radius + 1) return i;
    for (; i + radius + 32 <= n; i += 32) {
        __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i - radius));
        for (std::size_t j = i - radius + 1; j <= i + radius; ++j) {
            const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j));
            acc = Min ? _mm256_min_epu8(acc, v) : _mm256_max_epu8(acc, v);
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), acc);
    }
    return i;
}

SEGMERGE_AVX2 void window_min(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius) {
    const std::size_t done = window_interior<true>(in, out, n, radius);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= radius && i < done) continue;
        if (i < radius || i + radius >= n) {
            out[i] = 0;
            continue;
        }
        std::uint8_t v = in[i - radius];
        for (std::size_t j = i - radius + 1; j <= i + radius; ++j) v = std::min(v, in[j]);
        out[i] = v;
    }
}

SEGMERGE_AVX2 void window_max(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius) {
    const std::size_t done = window_interior<false>(in, out, n, radius);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= radius && i < done) continue;
        const std::size_t lo = i < radius ? 0 : i - radius;
        const std::size_t hi = std::min(n - 1, i + radius);
        std::uint8_t v = in[lo];
        for (std::size_t j = lo + 1; j <= hi; ++j) v = std::max(v, in[j]);
        out[i] = v;
    }
}

}  // namespace

const KernelTable kTable{Isa::avx2, luma_rgb,   sobel_row,  threshold_gt,
                         rows_min,  rows_max,   window_min, window_max};

}  // namespace segmerge::kernels::avx2

#endif
