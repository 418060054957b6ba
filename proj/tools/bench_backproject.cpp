// Compares the incremental sliding-histogram scan against the serial
// per-window recompute on a synthetic 640x480 scene.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "pyra/backproject.hpp"
#include "pyra/color.hpp"
#include "pyra/eval.hpp"
#include "pyra/histogram.hpp"

using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main() {
    pyra::SceneParams params;
    params.width = 640;
    params.height = 480;
    params.n_insects = 3;
    params.clutter_level = 4;
    auto [image, gt] = pyra::generate_scene(42, params);
    pyra::HsvImage hsv = pyra::rgb_to_hsv(image);

    pyra::Template tmpl;
    tmpl.window_w = 33;
    tmpl.window_h = 33;
    tmpl.hist = pyra::h_histogram(hsv, {100, 100, 33, 33});

    pyra::ProbabilityMap fast, naive;
    double fast_ms = time_ms([&] { fast = pyra::backproject_single(hsv, tmpl); });
    double naive_ms = time_ms([&] { naive = pyra::backproject_single_naive(hsv, tmpl); });

    double max_diff = 0.0;
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(fast.values[i] - naive.values[i]));
    }

    std::printf("scene: %dx%d, window 33x33, 256 bins\n", params.width, params.height);
    std::printf("incremental scan: %8.1f ms\n", fast_ms);
    std::printf("serial reference: %8.1f ms\n", naive_ms);
    std::printf("speedup: %.1fx, max |diff| = %.3e\n", naive_ms / fast_ms, max_diff);
    return max_diff < 1e-9 ? 0 : 1;
}
