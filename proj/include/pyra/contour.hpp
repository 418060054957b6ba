#pragma once

#include <optional>
#include <vector>

#include "pyra/image.hpp"

namespace pyra {

struct Point {
    int x = 0;
    int y = 0;

    bool operator==(const Point&) const = default;
};

struct Contour {
    enum class Kind { Outer, Hole };

    std::vector<Point> points;  // closed loop, last point connects to first
    Kind kind = Kind::Outer;
    double area = 0.0;       // |shoelace| of the traced loop
    double perimeter = 0.0;  // 1 per axial step, sqrt(2) per diagonal step
};

struct Triangle {
    Point v1, v2, v3;

    double signed_area() const {
        return 0.5 * (static_cast<double>(v2.x - v1.x) * (v3.y - v1.y) -
                      static_cast<double>(v3.x - v1.x) * (v2.y - v1.y));
    }
};

// Border following over 8-connected foreground; each connected component
// yields one outer contour, enclosed background regions yield hole
// contours. Outer loops are oriented with positive shoelace sign, holes
// negative. Input must be strictly binary (0/255).
std::vector<Contour> find_contours(const GrayMap& binary);

// Drops holes and outer contours below the area/perimeter thresholds.
std::vector<Contour> filter_contours(const std::vector<Contour>& contours, double min_area,
                                     double min_perimeter);

// Ramer-Douglas-Peucker with tolerance epsilon_frac * perimeter, doubled
// up to max_retries times until at most 3 vertices remain. Returns a
// triangle only for exactly 3 non-collinear vertices.
std::optional<Triangle> approx_triangle(const Contour& contour, double epsilon_frac = 0.02,
                                        int max_retries = 8);

// Open-chain RDP used by approx_triangle; exposed for tests.
std::vector<Point> rdp_simplify(const std::vector<Point>& chain, double epsilon);

}  // namespace pyra
