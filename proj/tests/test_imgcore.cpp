#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pyra/color.hpp"
#include "pyra/imageio.hpp"

using namespace pyra;

namespace {

// Straight-line, unoptimized transcription of the paper-mode conversion,
// kept independent of the library implementation.
HsvPixel hsv_oracle(int r, int g, int b) {
    int v = std::max(r, std::max(g, b));
    int mn = std::min(r, std::min(g, b));
    if (v == 0) return {0, 0, 0};
    double s = (v - mn) * 255.0 / v;
    if (v == mn) return {0, 0, v};
    double h;
    if (v == r)
        h = (g - b) * 60.0 / s;
    else if (v == g)
        h = 180.0 + (b - r) * 60.0 / s;
    else
        h = 240.0 + (r - g) * 60.0 / s;
    if (h < 0) h += 360.0;
    int hi = static_cast<int>(std::lround(h));
    hi = std::clamp(hi, 0, 255);
    return {hi, static_cast<int>(std::lround(s)), v};
}

RgbImage random_image(std::mt19937& gen, int w, int h) {
    RgbImage img(w, h);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& b : img.pixels) b = static_cast<std::uint8_t>(d(gen));
    return img;
}

}  // namespace

TEST_CASE("rgb_to_hsv pure primaries") {
    auto p = rgb_to_hsv_pixel(0, 0, 0);
    CHECK(p.h == 0);
    CHECK(p.s == 0);
    CHECK(p.v == 0);

    p = rgb_to_hsv_pixel(255, 0, 0);
    CHECK(p.h == 0);
    CHECK(p.s == 255);
    CHECK(p.v == 255);

    p = rgb_to_hsv_pixel(0, 255, 0);
    CHECK(p.h == 180);
    CHECK(p.s == 255);
    CHECK(p.v == 255);

    p = rgb_to_hsv_pixel(0, 0, 255);
    CHECK(p.h == 240);
    CHECK(p.s == 255);
    CHECK(p.v == 255);
}

TEST_CASE("gray pixels map to S=0, H=0") {
    for (int g = 0; g <= 255; g += 17) {
        auto p = rgb_to_hsv_pixel(g, g, g);
        CHECK(p.h == 0);
        CHECK(p.s == 0);
        CHECK(p.v == g);
    }
}

TEST_CASE("matches straight-line oracle on 10000 random pixels, exactly") {
    std::mt19937 gen(99);
    std::uniform_int_distribution<int> d(0, 255);
    for (int i = 0; i < 10000; ++i) {
        int r = d(gen), g = d(gen), b = d(gen);
        auto got = rgb_to_hsv_pixel(r, g, b);
        auto want = hsv_oracle(r, g, b);
        REQUIRE(got.h == want.h);
        REQUIRE(got.s == want.s);
        REQUIRE(got.v == want.v);
        CHECK(got.v == std::max(r, std::max(g, b)));
        CHECK(got.s >= 0);
        CHECK(got.s <= 255);
    }
}

TEST_CASE("conversion is pixel-local") {
    std::mt19937 gen(5);
    RgbImage img = random_image(gen, 17, 9);
    HsvImage hsv = rgb_to_hsv(img);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto* p = img.px(x, y);
            auto one = rgb_to_hsv_pixel(p[0], p[1], p[2]);
            CHECK(hsv.h(x, y) == one.h);
            CHECK(hsv.s(x, y) == one.s);
            CHECK(hsv.v(x, y) == one.v);
        }
    }
}

TEST_CASE("standard hsv mode stays in range and differs from paper mode") {
    auto std_green = rgb_to_hsv_pixel(0, 255, 0, HsvMode::Standard);
    CHECK(std_green.h == 85);  // 120 deg rescaled to 0..255
    auto paper_green = rgb_to_hsv_pixel(0, 255, 0, HsvMode::Paper);
    CHECK(paper_green.h == 180);
    std::mt19937 gen(6);
    std::uniform_int_distribution<int> d(0, 255);
    for (int i = 0; i < 2000; ++i) {
        auto p = rgb_to_hsv_pixel(d(gen), d(gen), d(gen), HsvMode::Standard);
        CHECK(p.h >= 0);
        CHECK(p.h <= 255);
    }
}

TEST_CASE("png round-trip: 2x2 all-red") {
    RgbImage img(2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) img.set(x, y, 255, 0, 0);
    RgbImage back = decode_image(encode_png(img));
    CHECK(back == img);
}

TEST_CASE("png round-trip: 100 random images decode-stable") {
    std::mt19937 gen(1234);
    std::uniform_int_distribution<int> dim(1, 40);
    for (int i = 0; i < 100; ++i) {
        RgbImage img = random_image(gen, dim(gen), dim(gen));
        RgbImage back = decode_image(encode_png(img));
        REQUIRE(back == img);
    }
}

TEST_CASE("decode errors") {
    CHECK_THROWS_AS(decode_image({}), DecodeError);
    CHECK_THROWS_AS(decode_image({0x89, 'P', 'N', 'G', 0, 1, 2, 3}), DecodeError);
    // valid signature, truncated body
    RgbImage img(4, 4);
    auto bytes = encode_png(img);
    bytes.resize(bytes.size() / 2);
    CHECK_THROWS_AS(decode_image(bytes), DecodeError);
}

TEST_CASE("grayscale png decodes as promoted rgb") {
    GrayMap g(3, 3);
    g.at(1, 1) = 200;
    RgbImage back = decode_image(encode_png(g));
    REQUIRE(back.width == 3);
    REQUIRE(back.height == 3);
    const auto* p = back.px(1, 1);
    CHECK(p[0] == 200);
    CHECK(p[1] == 200);
    CHECK(p[2] == 200);
}
