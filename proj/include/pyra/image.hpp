#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pyra {

// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {
        if (w < 1 || h < 1) throw std::invalid_argument("RgbImage: dimensions must be positive");
    }

    std::uint8_t* px(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    const std::uint8_t* px(int x, int y) const {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = px(x, y);
        p[0] = r; p[1] = g; p[2] = b;
    }

    bool operator==(const RgbImage&) const = default;
};

// H/S/V planes. The H plane holds integer hue values already rounded and
// clamped into [0,255]; S and V are 0..255.
struct HsvImage {
    int width = 0;
    int height = 0;
    std::vector<std::int16_t> h_plane;
    std::vector<std::uint8_t> s_plane;
    std::vector<std::uint8_t> v_plane;

    HsvImage() = default;
    HsvImage(int w, int h)
        : width(w), height(h),
          h_plane(static_cast<std::size_t>(w) * h, 0),
          s_plane(static_cast<std::size_t>(w) * h, 0),
          v_plane(static_cast<std::size_t>(w) * h, 0) {}

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    int h(int x, int y) const { return h_plane[idx(x, y)]; }
    int s(int x, int y) const { return s_plane[idx(x, y)]; }
    int v(int x, int y) const { return v_plane[idx(x, y)]; }
};

// Single-channel 8-bit map (probability images, binary masks).
struct GrayMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    GrayMap() = default;
    GrayMap(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("GrayMap: dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayMap&) const = default;
};

// Per-pixel similarity field prior to quantization. Values are raw
// correlation scores in [-1,1] for a single-template scan.
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ProbabilityMap() = default;
    ProbabilityMap(int w, int h)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

}  // namespace pyra
