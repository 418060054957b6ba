#pragma once

#include <array>
#include <cstdint>

#include "pyra/contour.hpp"
#include "pyra/image.hpp"

namespace pyra {

// Raw and central moments up to order 3 of a filled pixel region.
struct MomentSet {
    // m[p][q] = sum x^p y^q over region pixels, p+q <= 3
    std::array<std::array<double, 4>, 4> m{};
    std::array<std::array<double, 4>, 4> mu{};
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

struct HuSignature {
    std::array<double, 7> phi{};
    std::array<double, 7> log_phi{};  // sign(phi)*log10|phi|, 0 -> 0
};

// Moments of the 8-connected foreground component seeded by the contour's
// first point. Throws if the contour touches no foreground pixel.
MomentSet region_moments(const GrayMap& binary, const Contour& contour);

// The seven Hu invariants of the normalized central moments.
HuSignature hu_signature(const MomentSet& ms);

// 1 / (1 + sum |log_phi_a - log_phi_b|), in (0, 1].
double shape_similarity(const HuSignature& a, const HuSignature& b);

}  // namespace pyra
