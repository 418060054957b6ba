#pragma once

#include <vector>

#include "pyra/histogram.hpp"
#include "pyra/image.hpp"

namespace pyra {

// One reference histogram plus the window it was measured over.
// Window dimensions are odd so windows center on a pixel.
struct Template {
    NormalizedHistogram hist;
    int window_w = 0;
    int window_h = 0;
};

struct TemplateSet {
    std::vector<Template> templates;

    int count() const { return static_cast<int>(templates.size()); }
};

// Sliding-window back-projection: each output pixel is the correlation
// between the template histogram and the histogram of the window centered
// there (replicate-padded at borders). Incremental column-update scan,
// parallelized over rows. stride > 1 computes a subgrid and replicates
// each value to its nearest neighbors.
ProbabilityMap backproject_single(const HsvImage& image, const Template& tmpl, int stride = 1);

// Serial reference: recomputes the full window histogram at every pixel.
// Kept as the oracle for the incremental scan and for benchmarking.
ProbabilityMap backproject_single_naive(const HsvImage& image, const Template& tmpl, int stride = 1);

// Per-pixel sum over template maps, divided by M when normalize is set,
// negatives clamped to 0, quantized round-half-up to 0..255.
GrayMap fuse_templates(const std::vector<ProbabilityMap>& maps, bool normalize = true);

// Grayscale 3x3 min-filter erosion, replicate padding.
GrayMap erode(const GrayMap& map, int iterations);

}  // namespace pyra
