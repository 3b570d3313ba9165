#include "segmerge/image.hpp"

#include "segmerge/kernels.hpp"

#include <algorithm>

namespace segmerge {

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
    data_.resize(pixel_count() * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), data_(std::move(interleaved)) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
    if (data_.size() != pixel_count() * 3)
        throw std::invalid_argument("RGB buffer size does not match dimensions");
}

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage gray(img.width(), img.height());
    kernels::active().luma_rgb(img.bytes().data(), gray.data(), img.pixel_count());
    return gray;
}

HueSat hue_saturation(Rgb c) noexcept {
    const int mx = std::max({c.r, c.g, c.b});
    const int mn = std::min({c.r, c.g, c.b});
    const int delta = mx - mn;
    if (delta == 0) return {0.0, 0.0};

    const double d = delta;
    double h;
    if (mx == c.r)
        h = 60.0 * ((c.g - c.b) / d);
    else if (mx == c.g)
        h = 60.0 * ((c.b - c.r) / d + 2.0);
    else
        h = 60.0 * ((c.r - c.g) / d + 4.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h = 0.0;
    return {h, d / mx};
}

HsPixelPlane to_hue_saturation(const RgbImage& img) {
    HsPixelPlane hs{Plane<double>(img.width(), img.height()), Plane<double>(img.width(), img.height())};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const auto [h, s] = hue_saturation(img.at(x, y));
            hs.hue.at(x, y) = h;
            hs.saturation.at(x, y) = s;
        }
    }
    return hs;
}

}  // namespace segmerge
