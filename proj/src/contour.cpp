#include "pyra/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pyra {

namespace {

// clockwise 8-neighborhood starting east
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int dir_from(Point from, Point to) {
    for (int d = 0; d < 8; ++d) {
        if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
    }
    throw std::logic_error("dir_from: points not adjacent");
}

double shoelace(const std::vector<Point>& pts) {
    double acc = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        acc += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
    }
    return 0.5 * acc;
}

double step_perimeter(const std::vector<Point>& pts) {
    if (pts.size() < 2) return 0.0;
    double acc = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        acc += (a.x != b.x && a.y != b.y) ? std::numbers::sqrt2 : 1.0;
    }
    return acc;
}

}  // namespace

std::vector<Contour> find_contours(const GrayMap& binary) {
    const int W = binary.width, H = binary.height;
    std::vector<int> f(static_cast<std::size_t>(W) * H);
    for (std::size_t i = 0; i < binary.values.size(); ++i) {
        std::uint8_t v = binary.values[i];
        if (v != 0 && v != 255) throw std::invalid_argument("find_contours: input is not binary");
        f[i] = v == 255 ? 1 : 0;
    }
    auto at = [&](int x, int y) -> int& { return f[static_cast<std::size_t>(y) * W + x]; };
    auto get = [&](int x, int y) -> int {
        if (x < 0 || x >= W || y < 0 || y >= H) return 0;
        return f[static_cast<std::size_t>(y) * W + x];
    };

    std::vector<Contour> out;
    int nbd = 1;

    // Suzuki-style border following over 8-connected foreground.
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            bool outer = false, hole = false;
            if (at(x, y) == 1 && get(x - 1, y) == 0) {
                outer = true;
            } else if (at(x, y) >= 1 && get(x + 1, y) == 0) {
                hole = true;
            }
            if (!outer && !hole) continue;

            ++nbd;
            Point start{x, y};
            Point prev = outer ? Point{x - 1, y} : Point{x + 1, y};

            // clockwise search from prev for the first nonzero neighbor
            int d0 = dir_from(start, prev);
            int found = -1;
            for (int k = 1; k <= 8; ++k) {
                int d = (d0 + k) % 8;
                if (get(start.x + kDx[d], start.y + kDy[d]) != 0) {
                    found = d;
                    break;
                }
            }

            Contour contour;
            contour.kind = outer ? Contour::Kind::Outer : Contour::Kind::Hole;

            if (found < 0) {
                at(x, y) = -nbd;  // isolated pixel
                contour.points.push_back(start);
            } else {
                Point first_next{start.x + kDx[found], start.y + kDy[found]};
                Point p2 = first_next;  // previously examined pixel
                Point p3 = start;       // current border pixel
                while (true) {
                    // counterclockwise search from the neighbor after p2 around p3
                    int d2 = dir_from(p3, p2);
                    int d4 = -1;
                    bool saw_zero_right = false;
                    for (int k = 1; k <= 8; ++k) {
                        int d = (d2 - k + 16) % 8;
                        int nx = p3.x + kDx[d], ny = p3.y + kDy[d];
                        if (get(nx, ny) != 0) {
                            d4 = d;
                            break;
                        }
                        if (d == 0) saw_zero_right = true;  // (x3+1, y3) examined and zero
                    }
                    Point p4{p3.x + kDx[d4], p3.y + kDy[d4]};

                    if (saw_zero_right) {
                        at(p3.x, p3.y) = -nbd;
                    } else if (at(p3.x, p3.y) == 1) {
                        at(p3.x, p3.y) = nbd;
                    }
                    contour.points.push_back(p3);

                    if (p4 == start && p3 == first_next) break;
                    p2 = p3;
                    p3 = p4;
                }
            }

            double signed_area = shoelace(contour.points);
            bool want_positive = contour.kind == Contour::Kind::Outer;
            if ((want_positive && signed_area < 0) || (!want_positive && signed_area > 0)) {
                std::reverse(contour.points.begin(), contour.points.end());
                signed_area = -signed_area;
            }
            contour.area = std::abs(signed_area);
            contour.perimeter = step_perimeter(contour.points);
            out.push_back(std::move(contour));
        }
    }
    return out;
}

std::vector<Contour> filter_contours(const std::vector<Contour>& contours, double min_area,
                                     double min_perimeter) {
    if (min_area < 0 || min_perimeter < 0)
        throw std::invalid_argument("filter_contours: negative threshold");
    std::vector<Contour> out;
    for (const auto& c : contours) {
        if (c.kind == Contour::Kind::Hole) continue;
        if (c.area < min_area || c.perimeter < min_perimeter) continue;
        out.push_back(c);
    }
    return out;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = p.x - a.x, wy = p.y - a.y;
    double len2 = vx * vx + vy * vy;
    if (len2 == 0.0) return std::hypot(wx, wy);
    // perpendicular distance to the infinite line through a,b
    return std::abs(vx * wy - vy * wx) / std::sqrt(len2);
}

void rdp_recurse(const std::vector<Point>& chain, std::size_t begin, std::size_t end, double eps,
                 std::vector<Point>& out) {
    double max_dist = 0.0;
    std::size_t split = begin;
    for (std::size_t i = begin + 1; i < end; ++i) {
        double d = point_segment_distance(chain[i], chain[begin], chain[end]);
        if (d > max_dist) {
            max_dist = d;
            split = i;
        }
    }
    if (max_dist > eps) {
        rdp_recurse(chain, begin, split, eps, out);
        out.push_back(chain[split]);
        rdp_recurse(chain, split, end, eps, out);
    }
}

}  // namespace

std::vector<Point> rdp_simplify(const std::vector<Point>& chain, double epsilon) {
    if (chain.size() < 3) return chain;
    std::vector<Point> out;
    out.push_back(chain.front());
    rdp_recurse(chain, 0, chain.size() - 1, epsilon, out);
    out.push_back(chain.back());
    return out;
}

std::optional<Triangle> approx_triangle(const Contour& contour, double epsilon_frac,
                                        int max_retries) {
    if (epsilon_frac <= 0.0 || epsilon_frac >= 1.0)
        throw std::invalid_argument("approx_triangle: epsilon_frac out of (0,1)");
    const auto& pts = contour.points;
    const std::size_t n = pts.size();
    if (n < 3) return std::nullopt;

    // split the closed loop at its two mutually farthest anchor points
    auto dist2 = [&](std::size_t i, std::size_t j) {
        double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
        return dx * dx + dy * dy;
    };
    std::size_t a = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (dist2(0, i) > dist2(0, a)) a = i;
    }
    std::size_t b = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist2(a, i) > dist2(a, b)) b = i;
    }
    if (a == b) return std::nullopt;  // all points coincide

    std::vector<Point> chain1, chain2;
    for (std::size_t i = a;; i = (i + 1) % n) {
        chain1.push_back(pts[i]);
        if (i == b) break;
    }
    for (std::size_t i = b;; i = (i + 1) % n) {
        chain2.push_back(pts[i]);
        if (i == a) break;
    }

    double eps = epsilon_frac * contour.perimeter;
    std::vector<Point> verts;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<Point> s1 = rdp_simplify(chain1, eps);
        std::vector<Point> s2 = rdp_simplify(chain2, eps);
        verts.assign(s1.begin(), s1.end() - 1);  // drop b, chain2 starts there
        verts.insert(verts.end(), s2.begin(), s2.end() - 1);
        if (verts.size() <= 3) break;
        eps *= 2.0;
    }

    if (verts.size() != 3) return std::nullopt;
    Triangle t{verts[0], verts[1], verts[2]};
    if (t.signed_area() == 0.0) return std::nullopt;  // collinear
    return t;
}

}  // namespace pyra
