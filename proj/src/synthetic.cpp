#include "segmerge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace segmerge::synthetic {
namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

// h in degrees, s and v in [0, 1].
Rgb from_hsv(double h, double s, double v) {
    h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = c, g = x; break;
        case 1: r = x, g = c; break;
        case 2: g = c, b = x; break;
        case 3: g = x, b = c; break;
        case 4: r = x, b = c; break;
        default: r = c, b = x; break;
    }
    const double m = v - c;
    return {to_byte((r + m) * 255.0), to_byte((g + m) * 255.0), to_byte((b + m) * 255.0)};
}

}  // namespace

RgbImage two_disks(int width, int height) {
    RgbImage img(width, height, Rgb{40, 40, 40});
    const double r = std::min(width, height) * 0.16;
    const double cy = height / 2.0;
    const double ax = width * 0.3, bx = width * 0.7;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            if (std::hypot(px - ax, py - cy) <= r)
                img.set(x, y, Rgb{240, 60, 60});
            else if (std::hypot(px - bx, py - cy) <= r)
                img.set(x, y, Rgb{60, 220, 60});
        }
    }
    return img;
}

RgbImage textured_subject(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    RgbImage img(width, height);

    const double cx = width * 0.5, cy = height * 0.55;
    const double rx = width * 0.34, ry = height * 0.36;

    // Cell sites on a jittered grid covering the ellipse.
    struct Site {
        double x, y, value, hue;
    };
    std::vector<Site> sites;
    const double spacing = std::min(width, height) * 0.11;
    for (double y = cy - ry; y <= cy + ry; y += spacing)
        for (double x = cx - rx; x <= cx + rx; x += spacing)
            sites.push_back({x + rng.uniform(-0.3, 0.3) * spacing, y + rng.uniform(-0.3, 0.3) * spacing,
                             rng.uniform(0.72, 0.95), rng.uniform(27.0, 33.0)});

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            const double e = std::hypot((px - cx) / rx, (py - cy) / ry);
            if (e > 1.0) {
                const double n = rng.uniform(-3.0, 3.0);
                img.set(x, y, Rgb{to_byte(78 + n), to_byte(92 + n), to_byte(112 + n)});
                continue;
            }
            // Brightness dips toward cell borders (small gap between the two
            // nearest sites); a bright rim closes the subject off from the background.
            double d1 = 1e30, d2 = 1e30;
            const Site* nearest = nullptr;
            for (const auto& s : sites) {
                const double d = std::hypot(px - s.x, py - s.y);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    nearest = &s;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            double v = 0.86;
            double hue = 30.0;
            if (e < 0.88) {
                const double t = std::min(1.0, (d2 - d1) / 10.0);
                v = nearest->value * (0.42 + 0.58 * t * t * (3.0 - 2.0 * t));
                hue = nearest->hue;
            }
            v = std::clamp(v + rng.uniform(-0.02, 0.02), 0.0, 1.0);
            img.set(x, y, from_hsv(hue + rng.uniform(-1.5, 1.5), 0.55 + rng.uniform(-0.02, 0.02), v));
        }
    }
    return img;
}

RgbImage random_blobs(std::uint64_t seed, int width, int height) {
    Rng rng(seed);
    const double bg_hue = rng.uniform(0.0, 360.0);
    const double bg_sat = rng.uniform(0.05, 0.4);
    const double bg_val = rng.uniform(0.12, 0.3);
    RgbImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.set(x, y, from_hsv(bg_hue + rng.uniform(-6, 6), bg_sat, bg_val + rng.uniform(-0.03, 0.03)));

    const int blobs = rng.integer(3, 7);
    for (int b = 0; b < blobs; ++b) {
        const double bx = rng.uniform(0.15, 0.85) * width, by = rng.uniform(0.15, 0.85) * height;
        const double brx = rng.uniform(0.08, 0.2) * width, bry = rng.uniform(0.08, 0.2) * height;
        const double hue = rng.uniform(0.0, 360.0), sat = rng.uniform(0.4, 1.0), val = rng.uniform(0.7, 1.0);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double e = std::hypot((x + 0.5 - bx) / brx, (y + 0.5 - by) / bry);
                if (e <= 1.0)
                    img.set(x, y, from_hsv(hue + rng.uniform(-8, 8), std::clamp(sat + rng.uniform(-0.1, 0.1), 0.0, 1.0),
                                           std::clamp(val - 0.25 * e + rng.uniform(-0.05, 0.05), 0.0, 1.0)));
            }
        }
    }
    return img;
}

}  // namespace segmerge::synthetic
