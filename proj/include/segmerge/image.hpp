#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace segmerge {

/// Dense row-major plane of `T`, `width * height` elements.
template <class T>
class Plane {
public:
    using value_type = T;

    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be positive");
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }
    Plane(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("pixel buffer size does not match dimensions");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& at(int x, int y) { return data_[index(x, y)]; }
    const T& at(int x, int y) const { return data_[index(x, y)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
    template <class U>
    bool same_shape(const Plane<U>& other) const noexcept {
        return same_shape(other.width(), other.height());
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using GrayImage = Plane<std::uint8_t>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Interleaved 8-bit RGB image.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});
    RgbImage(int width, int height, std::vector<std::uint8_t> interleaved);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

    Rgb at(int x, int y) const noexcept {
        const auto* p = data_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
        return {p[0], p[1], p[2]};
    }
    void set(int x, int y, Rgb c) noexcept {
        auto* p = data_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    /// R,G,B triples, row-major.
    std::span<const std::uint8_t> bytes() const noexcept { return data_; }
    std::span<std::uint8_t> bytes() noexcept { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Hue (degrees, [0,360)) and saturation ([0,1]) per pixel; value is not kept.
struct HsPixelPlane {
    Plane<double> hue;
    Plane<double> saturation;

    int width() const noexcept { return hue.width(); }
    int height() const noexcept { return hue.height(); }
};

/// Rec.601 luma, rounded half up.
GrayImage to_grayscale(const RgbImage& img);

/// Hexcone HSV with the value channel dropped. Achromatic pixels get hue 0, saturation 0.
HsPixelPlane to_hue_saturation(const RgbImage& img);

struct HueSat {
    double hue;
    double saturation;
};
HueSat hue_saturation(Rgb c) noexcept;

}  // namespace segmerge
