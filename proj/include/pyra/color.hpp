#pragma once

#include "pyra/image.hpp"

namespace pyra {

enum class HsvMode {
    Paper,     // hue branches with 180/240 offsets, divided by S
    Standard,  // textbook hue in degrees, rescaled to 0..255
};

struct HsvPixel {
    int h;
    int s;
    int v;
};

// Single-pixel conversion. Achromatic pixels (V==0 or max==min) map to
// H=0, S per the saturation formula; negative hue wraps by +360 and the
// result is rounded and clamped into [0,255].
HsvPixel rgb_to_hsv_pixel(int r, int g, int b, HsvMode mode = HsvMode::Paper);

HsvImage rgb_to_hsv(const RgbImage& image, HsvMode mode = HsvMode::Paper);

}  // namespace pyra
