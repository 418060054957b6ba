#pragma once

#include <vector>

#include "pyra/image.hpp"

namespace pyra {

// N-bin distribution over the H channel, sums to 1.
struct NormalizedHistogram {
    std::vector<double> bins;

    int n_bins() const { return static_cast<int>(bins.size()); }
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

inline constexpr int kDefaultBins = 256;

// Histogram of the H plane over `region` (clamped to image bounds),
// normalized by the region area. H values >= n_bins land in the top bin.
NormalizedHistogram h_histogram(const HsvImage& image, Rect region, int n_bins = kDefaultBins);

// Mean-centered correlation between two equal-sized histograms, in [-1,1].
// Either side having zero variance yields 0.
double correlation_similarity(const NormalizedHistogram& h1, const NormalizedHistogram& h2);

}  // namespace pyra
