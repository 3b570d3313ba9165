#include "segmerge/image_io.hpp"

#include "segmerge/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace segmerge {
namespace {

namespace fs = std::filesystem;

std::string quoted(const fs::path& path) { return "'" + path.string() + "'"; }

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw IoError(quoted(path) + ": file not found");
    if (fs::is_directory(path, ec)) throw IoError(quoted(path) + ": is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(quoted(path) + ": cannot open for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(quoted(path) + ": read failed");
    return bytes;
}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const fs::path& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError(quoted(path) + ": cannot open for writing: " + std::strerror(errno));
    return f;
}

// --- PNG ------------------------------------------------------------------
//
// libpng reports errors through longjmp. decode_png/encode_png keep only
// trivially destructible locals and write into caller-owned buffers.

struct ErrorSink {
    char message[256] = {};
};

void on_png_error(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
    std::snprintf(sink->message, sizeof sink->message, "%s", msg);
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct MemoryReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (src->size - src->offset < length) png_error(png, "unexpected end of stream");
    std::memcpy(out, src->data + src->offset, length);
    src->offset += length;
}

enum class PngTarget { rgb8, gray16, header_only };

struct DecodedPng {
    PngHeader header;
    std::vector<std::uint8_t> pixels;  // rgb8: 3 bytes/pixel; gray16: native-endian uint16
};

PngColor to_color(int type) {
    switch (type) {
        case PNG_COLOR_TYPE_GRAY: return PngColor::gray;
        case PNG_COLOR_TYPE_GRAY_ALPHA: return PngColor::gray_alpha;
        case PNG_COLOR_TYPE_PALETTE: return PngColor::palette;
        case PNG_COLOR_TYPE_RGB_ALPHA: return PngColor::rgba;
        default: return PngColor::rgb;
    }
}

// Returns false with `sink.message` set on failure.
bool decode_png(const std::uint8_t* data, std::size_t size, PngTarget target, DecodedPng& out,
                std::vector<png_bytep>& rows, ErrorSink& sink) {
    MemoryReader reader{data, size, 0};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
    if (png == nullptr) {
        std::snprintf(sink.message, sizeof sink.message, "out of memory");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &reader, read_from_memory);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    out.header = {static_cast<int>(width), static_cast<int>(height), depth, to_color(color)};
    if (target == PngTarget::header_only) {
        png_destroy_read_struct(&png, &info, nullptr);
        return true;
    }
    if (width > 0x7fffffffu / 4 || height > 0x7fffffffu / 4) png_error(png, "image too large");

    if (target == PngTarget::rgb8) {
        if (depth == 16) png_error(png, "16-bit color depth is not supported");
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
        png_set_strip_alpha(png);
    } else {
        if (color != PNG_COLOR_TYPE_GRAY || depth != 16) png_error(png, "expected a 16-bit grayscale PNG");
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_error(png, "unexpected transparency chunk");
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
        png_set_swap(png);
#endif
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    const std::size_t expected = target == PngTarget::rgb8 ? 3u * width : 2u * width;
    if (rowbytes != expected) png_error(png, "unexpected row layout after transformation");
    out.pixels.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = out.pixels.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

DecodedPng decode_png_file(const fs::path& path, PngTarget target) {
    const auto bytes = read_file(path);
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError(quoted(path) + ": not a PNG file");
    DecodedPng out;
    std::vector<png_bytep> rows;
    ErrorSink sink;
    if (!decode_png(bytes.data(), bytes.size(), target, out, rows, sink))
        throw FormatError(quoted(path) + ": corrupt or unsupported PNG: " + sink.message);
    return out;
}

bool encode_png(std::FILE* file, int width, int height, int depth, int color_type, png_bytepp rows,
                ErrorSink& sink) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
    if (png == nullptr) {
        std::snprintf(sink.message, sizeof sink.message, "out of memory");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
    if (depth == 16) png_set_swap(png);
#endif
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

void write_png(const fs::path& path, int width, int height, int depth, int color_type,
               const std::uint8_t* pixels, std::size_t rowbytes) {
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * rowbytes);
    auto file = open_for_write(path);
    ErrorSink sink;
    if (!encode_png(file.get(), width, height, depth, color_type, rows.data(), sink))
        throw IoError(quoted(path) + ": PNG encode failed: " + sink.message);
    if (std::fflush(file.get()) != 0 || std::ferror(file.get()))
        throw IoError(quoted(path) + ": write failed");
}

// --- PPM ------------------------------------------------------------------

bool is_ppm_path(const fs::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".ppm";
}

RgbImage decode_ppm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    std::size_t pos = 2;
    auto fail = [&](const std::string& why) -> FormatError {
        return FormatError(quoted(path) + ": corrupt PPM: " + why);
    };
    auto next_int = [&]() -> long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw fail("malformed header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000'000) throw fail("header value out of range");
        }
        return v;
    };
    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (width < 1 || height < 1) throw fail("non-positive dimensions");
    if (maxval != 255) throw FormatError(quoted(path) + ": unsupported PPM maxval " + std::to_string(maxval));
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("missing separator before raster");
    ++pos;
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    if (bytes.size() - pos < need) throw fail("truncated raster");
    return RgbImage(static_cast<int>(width), static_cast<int>(height),
                    std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                              bytes.begin() + static_cast<std::ptrdiff_t>(pos + need)));
}

void write_ppm(const fs::path& path, int width, int height, std::span<const std::uint8_t> rgb) {
    auto file = open_for_write(path);
    std::fprintf(file.get(), "P6\n%d %d\n255\n", width, height);
    if (std::fwrite(rgb.data(), 1, rgb.size(), file.get()) != rgb.size() || std::fflush(file.get()) != 0)
        throw IoError(quoted(path) + ": write failed");
}

}  // namespace

RgbImage load_image(const fs::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
        DecodedPng out;
        std::vector<png_bytep> rows;
        ErrorSink sink;
        if (!decode_png(bytes.data(), bytes.size(), PngTarget::rgb8, out, rows, sink))
            throw FormatError(quoted(path) + ": corrupt or unsupported PNG: " + sink.message);
        return RgbImage(out.header.width, out.header.height, std::move(out.pixels));
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes, path);
    throw FormatError(quoted(path) + ": unsupported format (expected PNG or binary PPM)");
}

void save_image(const RgbImage& img, const fs::path& path) {
    if (is_ppm_path(path)) return write_ppm(path, img.width(), img.height(), img.bytes());
    write_png(path, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, img.bytes().data(),
              3u * static_cast<std::size_t>(img.width()));
}

void save_image(const GrayImage& img, const fs::path& path) {
    if (is_ppm_path(path)) {
        std::vector<std::uint8_t> rgb;
        rgb.reserve(img.size() * 3);
        for (auto v : img.pixels()) rgb.insert(rgb.end(), {v, v, v});
        return write_ppm(path, img.width(), img.height(), rgb);
    }
    write_png(path, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY, img.data(),
              static_cast<std::size_t>(img.width()));
}

void save_gray16_png(const Plane<std::uint16_t>& img, const fs::path& path) {
    write_png(path, img.width(), img.height(), 16, PNG_COLOR_TYPE_GRAY,
              reinterpret_cast<const std::uint8_t*>(img.data()), 2u * static_cast<std::size_t>(img.width()));
}

Plane<std::uint16_t> load_gray16_png(const fs::path& path) {
    auto decoded = decode_png_file(path, PngTarget::gray16);
    std::vector<std::uint16_t> values(decoded.pixels.size() / 2);
    std::memcpy(values.data(), decoded.pixels.data(), decoded.pixels.size());
    return Plane<std::uint16_t>(decoded.header.width, decoded.header.height, std::move(values));
}

PngHeader read_png_header(const fs::path& path) {
    return decode_png_file(path, PngTarget::header_only).header;
}

}  // namespace segmerge
