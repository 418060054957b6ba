#include "pyra/color.hpp"

#include <algorithm>
#include <cmath>

namespace pyra {

namespace {

int clamp_hue(double h) {
    int hi = static_cast<int>(std::lround(h));
    return std::clamp(hi, 0, 255);
}

HsvPixel paper_pixel(int r, int g, int b) {
    int v = std::max({r, g, b});
    int mn = std::min({r, g, b});
    if (v == 0) return {0, 0, v};
    double s = (v - mn) * 255.0 / v;
    int s_out = static_cast<int>(std::lround(s));
    if (v == mn) return {0, 0, v};  // achromatic, hue undefined

    // branch on which channel attains the maximum; ties go to R, then G
    double h;
    if (v == r) {
        h = (g - b) * 60.0 / s;
    } else if (v == g) {
        h = 180.0 + (b - r) * 60.0 / s;
    } else {
        h = 240.0 + (r - g) * 60.0 / s;
    }
    if (h < 0) h += 360.0;
    return {clamp_hue(h), s_out, v};
}

HsvPixel standard_pixel(int r, int g, int b) {
    int v = std::max({r, g, b});
    int mn = std::min({r, g, b});
    if (v == 0) return {0, 0, v};
    int c = v - mn;
    int s_out = static_cast<int>(std::lround(c * 255.0 / v));
    if (c == 0) return {0, 0, v};

    double h;
    if (v == r) {
        h = 60.0 * (g - b) / c;
    } else if (v == g) {
        h = 120.0 + 60.0 * (b - r) / c;
    } else {
        h = 240.0 + 60.0 * (r - g) / c;
    }
    if (h < 0) h += 360.0;
    // degrees rescaled onto the 0..255 bin range
    return {clamp_hue(h * 255.0 / 360.0), s_out, v};
}

}  // namespace

HsvPixel rgb_to_hsv_pixel(int r, int g, int b, HsvMode mode) {
    return mode == HsvMode::Paper ? paper_pixel(r, g, b) : standard_pixel(r, g, b);
}

HsvImage rgb_to_hsv(const RgbImage& image, HsvMode mode) {
    HsvImage out(image.width, image.height);
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = image.pixels.data() + i * 3;
        HsvPixel hp = rgb_to_hsv_pixel(p[0], p[1], p[2], mode);
        out.h_plane[i] = static_cast<std::int16_t>(hp.h);
        out.s_plane[i] = static_cast<std::uint8_t>(hp.s);
        out.v_plane[i] = static_cast<std::uint8_t>(hp.v);
    }
    return out;
}

}  // namespace pyra
