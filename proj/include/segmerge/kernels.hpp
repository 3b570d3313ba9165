#pragma once

// Data-parallel inner loops shared by the pipeline stages. Every kernel has a
// scalar reference implementation; wider variants must produce bit-identical
// output and are selected once at runtime from the host CPU.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace segmerge::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;

    /// gray[i] = (299 R + 587 G + 114 B + 500) / 1000 over interleaved RGB.
    void (*luma_rgb)(const std::uint8_t* rgb, std::uint8_t* gray, std::size_t pixels);

    /// One output row of 3x3 Sobel magnitude. `above`/`below` are the already
    /// clamped neighbor rows; columns are clamped here.
    void (*sobel_row)(const std::uint8_t* above, const std::uint8_t* row, const std::uint8_t* below,
                      float* out, std::size_t width);

    /// out[i] = in[i] > t ? 1 : 0
    void (*threshold_gt)(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::uint8_t t);

    /// Elementwise min / max across `count` rows of length n.
    void (*rows_min)(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out, std::size_t n);
    void (*rows_max)(const std::uint8_t* const* rows, std::size_t count, std::uint8_t* out, std::size_t n);

    /// Sliding min over [i - radius, i + radius]; windows that leave the row yield 0.
    void (*window_min)(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius);
    /// Sliding max over the part of [i - radius, i + radius] inside the row.
    void (*window_max)(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t radius);
};

bool isa_supported(Isa isa) noexcept;

/// Table for a specific ISA. Throws std::runtime_error if the host cannot run it.
const KernelTable& table(Isa isa);

/// Best supported table. `SEGMERGE_ISA=scalar` in the environment pins the reference path.
const KernelTable& active();

namespace scalar {
extern const KernelTable kTable;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace segmerge::kernels
