#pragma once

#include <array>
#include <cstdint>

#include "pyra/image.hpp"

namespace pyra {

struct GrayHistogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;
    int p_min = 0;
    int p_max = 0;

    static GrayHistogram from_map(const GrayMap& map);
    void add(int level, std::uint64_t n = 1);
    void finalize();  // recomputes total, p_min, p_max from counts
};

enum class OtsuLower {
    Argmax,    // lower bound of the constrained search = argmax threshold
    Midpoint,  // lower bound = floor((mu1+mu2)/2) at the argmax split
};

struct ThresholdResult {
    int g_otsu = 0;
    int g_optimal = 0;
    double variance_at_optimal = 0.0;
};

// Maximum between-class variance threshold over T in [p_min, p_max];
// class 1 = levels <= T. Ties break to the lowest T.
int otsu(const GrayHistogram& hist);

// Re-runs the argmax restricted to [lower_bound, p_max] where the lower
// bound is the plain Otsu threshold (or the midpoint variant).
ThresholdResult constrained_otsu(const GrayHistogram& hist, OtsuLower lower = OtsuLower::Argmax);

// value > T -> 255, else 0.
GrayMap binarize(const GrayMap& map, int threshold);

}  // namespace pyra
