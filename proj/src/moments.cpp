#include "pyra/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pyra {

MomentSet region_moments(const GrayMap& binary, const Contour& contour) {
    if (contour.points.empty()) throw std::invalid_argument("region_moments: empty contour");

    // collect the 8-connected component under the contour's seed point
    Point seed = contour.points.front();
    if (binary.at(seed.x, seed.y) == 0)
        throw std::invalid_argument("region_moments: contour does not touch foreground");

    const int W = binary.width, H = binary.height;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(W) * H, 0);
    std::vector<Point> stack{seed};
    std::vector<Point> region;
    visited[static_cast<std::size_t>(seed.y) * W + seed.x] = 1;
    while (!stack.empty()) {
        Point p = stack.back();
        stack.pop_back();
        region.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = p.x + dx, ny = p.y + dy;
                if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
                std::size_t idx = static_cast<std::size_t>(ny) * W + nx;
                if (visited[idx] || binary.values[idx] == 0) continue;
                visited[idx] = 1;
                stack.push_back({nx, ny});
            }
        }
    }

    MomentSet ms;
    // raw moments as exact integer sums
    long long m[4][4] = {};
    for (const Point& p : region) {
        long long xp[4] = {1, p.x, static_cast<long long>(p.x) * p.x,
                           static_cast<long long>(p.x) * p.x * p.x};
        long long yq[4] = {1, p.y, static_cast<long long>(p.y) * p.y,
                           static_cast<long long>(p.y) * p.y * p.y};
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 3; ++b) m[a][b] += xp[a] * yq[b];
        }
    }
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; a + b <= 3; ++b) ms.m[a][b] = static_cast<double>(m[a][b]);
    }
    ms.centroid_x = ms.m[1][0] / ms.m[0][0];
    ms.centroid_y = ms.m[0][1] / ms.m[0][0];

    // central moments by direct summation about the centroid
    for (const Point& p : region) {
        double dx = p.x - ms.centroid_x;
        double dy = p.y - ms.centroid_y;
        double xp[4] = {1.0, dx, dx * dx, dx * dx * dx};
        double yq[4] = {1.0, dy, dy * dy, dy * dy * dy};
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 3; ++b) ms.mu[a][b] += xp[a] * yq[b];
        }
    }
    return ms;
}

HuSignature hu_signature(const MomentSet& ms) {
    if (ms.m[0][0] <= 0.0) throw std::invalid_argument("hu_signature: degenerate region");

    // eta_pq = mu_pq / mu_00^(1 + (p+q)/2)
    auto eta = [&](int p, int q) {
        return ms.mu[p][q] / std::pow(ms.mu[0][0], 1.0 + (p + q) / 2.0);
    };
    const double n20 = eta(2, 0), n02 = eta(0, 2), n11 = eta(1, 1);
    const double n30 = eta(3, 0), n03 = eta(0, 3), n21 = eta(2, 1), n12 = eta(1, 2);

    HuSignature sig;
    const double a = n30 + n12;  // x-skew group
    const double b = n21 + n03;  // y-skew group
    sig.phi[0] = n20 + n02;
    sig.phi[1] = (n20 - n02) * (n20 - n02) + 4.0 * n11 * n11;
    sig.phi[2] = (n30 - 3.0 * n12) * (n30 - 3.0 * n12) + (3.0 * n21 - n03) * (3.0 * n21 - n03);
    sig.phi[3] = a * a + b * b;
    sig.phi[4] = (n30 - 3.0 * n12) * a * (a * a - 3.0 * b * b) +
                 (3.0 * n21 - n03) * b * (3.0 * a * a - b * b);
    sig.phi[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    sig.phi[6] = (3.0 * n21 - n03) * a * (a * a - 3.0 * b * b) -
                 (n30 - 3.0 * n12) * b * (3.0 * a * a - b * b);

    // Invariants below the rasterization noise floor are treated as zero:
    // their sign is arbitrary for discrete regions and sign(phi)*log10|phi|
    // would swing by many decades between copies of the same shape.
    constexpr double kNoiseFloor = 1e-3;
    for (int i = 0; i < 7; ++i) {
        double v = sig.phi[static_cast<std::size_t>(i)];
        sig.log_phi[static_cast<std::size_t>(i)] =
            std::abs(v) < kNoiseFloor ? 0.0 : (v > 0 ? 1.0 : -1.0) * std::log10(std::abs(v));
    }
    return sig;
}

double shape_similarity(const HuSignature& a, const HuSignature& b) {
    double d = 0.0;
    for (int i = 0; i < 7; ++i) {
        d += std::abs(a.log_phi[static_cast<std::size_t>(i)] -
                      b.log_phi[static_cast<std::size_t>(i)]);
    }
    return 1.0 / (1.0 + d);
}

}  // namespace pyra
