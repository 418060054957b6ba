#include "pyra/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pyra {

NormalizedHistogram h_histogram(const HsvImage& image, Rect region, int n_bins) {
    if (n_bins < 1) throw std::invalid_argument("h_histogram: n_bins must be >= 1");
    int x0 = std::clamp(region.x, 0, image.width);
    int y0 = std::clamp(region.y, 0, image.height);
    int x1 = std::clamp(region.x + region.w, 0, image.width);
    int y1 = std::clamp(region.y + region.h, 0, image.height);
    long area = static_cast<long>(x1 - x0) * (y1 - y0);
    if (area < 1) throw std::invalid_argument("h_histogram: empty region");

    std::vector<long> counts(static_cast<std::size_t>(n_bins), 0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            int bin = std::min(image.h(x, y), n_bins - 1);
            ++counts[static_cast<std::size_t>(bin)];
        }
    }

    NormalizedHistogram out;
    out.bins.resize(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i) {
        out.bins[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(area);
    }
    return out;
}

double correlation_similarity(const NormalizedHistogram& h1, const NormalizedHistogram& h2) {
    if (h1.n_bins() != h2.n_bins())
        throw std::invalid_argument("correlation_similarity: bin-count mismatch");
    const int n = h1.n_bins();

    double mean1 = 0.0, mean2 = 0.0;
    for (int i = 0; i < n; ++i) {
        mean1 += h1.bins[static_cast<std::size_t>(i)];
        mean2 += h2.bins[static_cast<std::size_t>(i)];
    }
    mean1 /= n;
    mean2 /= n;

    double dot = 0.0, ss1 = 0.0, ss2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = h1.bins[static_cast<std::size_t>(i)] - mean1;
        double b = h2.bins[static_cast<std::size_t>(i)] - mean2;
        dot += a * b;
        ss1 += a * a;
        ss2 += b * b;
    }
    if (ss1 <= 0.0 || ss2 <= 0.0) return 0.0;  // zero-variance: no evidence
    return dot / std::sqrt(ss1 * ss2);
}

}  // namespace pyra
