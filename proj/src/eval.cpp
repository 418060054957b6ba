#include "pyra/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace pyra {

namespace {

using Vec2 = std::pair<double, double>;

double polygon_area(const std::vector<Vec2>& poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        acc += a.first * b.second - b.first * a.second;
    }
    return std::abs(acc) * 0.5;
}

bool point_in_polygon(double px, double py, const std::vector<Vec2>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double xi = poly[i].first, yi = poly[i].second;
        double xj = poly[j].first, yj = poly[j].second;
        if ((yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
    }
    return inside;
}

// Sutherland-Hodgman clip of a convex subject by a convex clip polygon.
std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::vector<Vec2>& clip) {
    // orient clip counterclockwise
    std::vector<Vec2> cl = clip;
    double s = 0.0;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        const auto& a = cl[i];
        const auto& b = cl[(i + 1) % cl.size()];
        s += a.first * b.second - b.first * a.second;
    }
    if (s < 0) std::reverse(cl.begin(), cl.end());

    for (std::size_t i = 0; i < cl.size() && !subject.empty(); ++i) {
        const Vec2 a = cl[i];
        const Vec2 b = cl[(i + 1) % cl.size()];
        auto side = [&](const Vec2& p) {
            return (b.first - a.first) * (p.second - a.second) -
                   (b.second - a.second) * (p.first - a.first);
        };
        std::vector<Vec2> out;
        for (std::size_t j = 0; j < subject.size(); ++j) {
            const Vec2& p = subject[j];
            const Vec2& q = subject[(j + 1) % subject.size()];
            double sp = side(p), sq = side(q);
            if (sp >= 0) out.push_back(p);
            if ((sp >= 0) != (sq >= 0)) {
                double t = sp / (sp - sq);
                out.push_back({p.first + t * (q.first - p.first),
                               p.second + t * (q.second - p.second)});
            }
        }
        subject = std::move(out);
    }
    return subject;
}

double triangle_polygon_iou(const Triangle& tri, const std::vector<Vec2>& poly) {
    std::vector<Vec2> t = {{static_cast<double>(tri.v1.x), static_cast<double>(tri.v1.y)},
                           {static_cast<double>(tri.v2.x), static_cast<double>(tri.v2.y)},
                           {static_cast<double>(tri.v3.x), static_cast<double>(tri.v3.y)}};
    double inter = polygon_area(clip_convex(t, poly));
    double uni = polygon_area(t) + polygon_area(poly) - inter;
    return uni > 0 ? inter / uni : 0.0;
}

}  // namespace

MatchAssignment match_detections(const GroundTruth& gt, const std::vector<Detection>& detections,
                                 MatchRule rule, double iou_threshold) {
    MatchAssignment out;
    out.detection_to_truth.assign(detections.size(), -1);
    std::vector<bool> taken(gt.regions.size(), false);

    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].similarity > detections[b].similarity;
    });

    for (std::size_t di : order) {
        const Triangle& t = detections[di].triangle;
        double cx = (t.v1.x + t.v2.x + t.v3.x) / 3.0;
        double cy = (t.v1.y + t.v2.y + t.v3.y) / 3.0;
        for (std::size_t ti = 0; ti < gt.regions.size(); ++ti) {
            if (taken[ti]) continue;
            bool hit = rule == MatchRule::Centroid
                           ? point_in_polygon(cx, cy, gt.regions[ti].polygon)
                           : triangle_polygon_iou(t, gt.regions[ti].polygon) >= iou_threshold;
            if (hit) {
                taken[ti] = true;
                out.detection_to_truth[di] = static_cast<int>(ti);
                ++out.matched;
                break;
            }
        }
    }
    return out;
}

double recognition_rate(std::uint64_t matched, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("recognition_rate: n must be >= 1");
    if (matched > n) throw std::invalid_argument("recognition_rate: matched > n");
    return static_cast<double>(matched) / static_cast<double>(n);
}

double false_alarm_rate(std::uint64_t matched, std::uint64_t x) {
    if (matched > x) throw std::invalid_argument("false_alarm_rate: matched > x");
    if (x == 0) return 0.0;  // no marks, no false alarms
    return static_cast<double>(x - matched) / static_cast<double>(x);
}

MetricsReport aggregate(const std::vector<ImageCounts>& per_image) {
    MetricsReport rep;
    double elapsed = 0.0;
    for (const auto& img : per_image) {
        rep.n += static_cast<std::uint64_t>(img.n);
        rep.x += static_cast<std::uint64_t>(img.x);
        rep.matched += static_cast<std::uint64_t>(img.matched);
        elapsed += img.elapsed_ms;
    }
    rep.beta = rep.n > 0 ? recognition_rate(rep.matched, rep.n) : 0.0;
    rep.delta = false_alarm_rate(rep.matched, rep.x);
    rep.mean_elapsed_ms = per_image.empty() ? 0.0 : elapsed / static_cast<double>(per_image.size());
    rep.per_image = per_image;
    return rep;
}

namespace {

// Hand-rolled draws so scenes are reproducible bit-for-bit per seed.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double uniform(double lo, double hi) {
        double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }
};

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

// Color families. The marking texture is the hue band the templates are
// built from; body and clutter sit in nearby but distinct bands.
void marking_color(Rng& rng, std::uint8_t* p) {
    int r = 200 + rng.uniform_int(-10, 10);
    int g = 140 + rng.uniform_int(-8, 8);
    int b = 40 + rng.uniform_int(-8, 8);
    p[0] = clamp8(r); p[1] = clamp8(g); p[2] = clamp8(b);
}

void body_color(Rng& rng, std::uint8_t* p) {
    int r = 140 + rng.uniform_int(-8, 8);
    int g = 95 + rng.uniform_int(-6, 6);
    int b = 85 + rng.uniform_int(-6, 6);
    p[0] = clamp8(r); p[1] = clamp8(g); p[2] = clamp8(b);
}

void clutter_color(Rng& rng, std::uint8_t* p) {
    int r = 200 + rng.uniform_int(-10, 10);
    int g = 182 + rng.uniform_int(-8, 8);
    int b = 30 + rng.uniform_int(-8, 8);
    p[0] = clamp8(r); p[1] = clamp8(g); p[2] = clamp8(b);
}

void background_color(Rng& rng, std::uint8_t* p) {
    int r = 55 + rng.uniform_int(-18, 18);
    int g = 140 + rng.uniform_int(-25, 25);
    int b = 45 + rng.uniform_int(-15, 15);
    p[0] = clamp8(r); p[1] = clamp8(g); p[2] = clamp8(b);
}

struct Blob {
    double cx, cy, a, b, angle;
};

bool blob_fits(const Blob& blob, const std::vector<Blob>& placed, int w, int h) {
    double r = std::max(blob.a, blob.b);
    if (blob.cx - r < 4 || blob.cx + r > w - 4 || blob.cy - r < 4 || blob.cy + r > h - 4)
        return false;
    for (const auto& other : placed) {
        double ro = std::max(other.a, other.b);
        double dx = blob.cx - other.cx, dy = blob.cy - other.cy;
        if (std::hypot(dx, dy) < r + ro + 8) return false;
    }
    return true;
}

bool inside_ellipse(const Blob& e, double x, double y) {
    double dx = x - e.cx, dy = y - e.cy;
    double u = dx * std::cos(e.angle) + dy * std::sin(e.angle);
    double v = -dx * std::sin(e.angle) + dy * std::cos(e.angle);
    return (u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) <= 1.0;
}

// Canonical marking shape, expressed about its centroid with unit circumradius.
// Every rendered marking (and the reference silhouette) is a rotated/scaled
// copy, so its Hu signature is the one thing that separates insects from
// clutter ellipses downstream.
constexpr std::array<Vec2, 3> kBaseTriangle = {
    {{-0.71625, -0.54258}, {0.97671, -0.21703}, {-0.26046, 0.75961}}};

std::array<Vec2, 3> marking_triangle(double cx, double cy, double scale, double theta) {
    std::array<Vec2, 3> out;
    double c = std::cos(theta), s = std::sin(theta);
    for (int k = 0; k < 3; ++k) {
        const auto& [u, v] = kBaseTriangle[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)] = {cx + scale * (u * c - v * s),
                                            cy + scale * (u * s + v * c)};
    }
    return out;
}

bool inside_triangle(const std::array<Vec2, 3>& t, double x, double y) {
    auto side = [&](const Vec2& a, const Vec2& b) {
        return (b.first - a.first) * (y - a.second) - (b.second - a.second) * (x - a.first);
    };
    double s0 = side(t[0], t[1]), s1 = side(t[1], t[2]), s2 = side(t[2], t[0]);
    return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

}  // namespace

std::pair<RgbImage, GroundTruth> generate_scene(std::uint64_t seed, const SceneParams& params) {
    if (params.width < 64 || params.height < 64)
        throw std::invalid_argument("generate_scene: dimensions must be >= 64");
    if (params.n_insects < 0) throw std::invalid_argument("generate_scene: negative insect count");

    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    const int W = params.width, H = params.height;

    RgbImage image(W, H);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) background_color(rng, image.px(x, y));
    }

    std::vector<Blob> placed;
    GroundTruth gt;

    auto place_blob = [&](double min_a, double max_a, double min_b, double max_b) {
        for (int tries = 0; tries < 200; ++tries) {
            Blob blob;
            blob.a = rng.uniform(min_a, max_a);
            blob.b = rng.uniform(min_b, max_b);
            blob.cx = rng.uniform(0, W);
            blob.cy = rng.uniform(0, H);
            blob.angle = rng.uniform(0, 2 * M_PI);
            if (blob_fits(blob, placed, W, H)) {
                placed.push_back(blob);
                return true;
            }
        }
        return false;
    };

    for (int i = 0; i < params.n_insects; ++i) {
        if (!place_blob(30, 44, 24, 34)) break;
        const Blob& body = placed.back();

        // wing marking: the canonical triangle at a random pose inside the body
        double theta = rng.uniform(0, 2 * M_PI);
        double scale = 0.82 * body.b * rng.uniform(0.9, 1.05);
        std::array<Vec2, 3> tri = marking_triangle(body.cx, body.cy, scale, theta);

        int x0 = static_cast<int>(body.cx - body.a - 1), x1 = static_cast<int>(body.cx + body.a + 2);
        int y0 = static_cast<int>(body.cy - body.a - 1), y1 = static_cast<int>(body.cy + body.a + 2);
        for (int y = std::max(y0, 0); y < std::min(y1, H); ++y) {
            for (int x = std::max(x0, 0); x < std::min(x1, W); ++x) {
                if (!inside_ellipse(body, x, y)) continue;
                if (inside_triangle(tri, x, y)) {
                    marking_color(rng, image.px(x, y));
                } else {
                    body_color(rng, image.px(x, y));
                }
            }
        }

        TruthRegion region;
        region.id = i;
        for (int k = 0; k < 8; ++k) {
            double ang = k * M_PI / 4.0;
            double u = (body.a + 2.0) * std::cos(ang);
            double v = (body.b + 2.0) * std::sin(ang);
            region.polygon.push_back({body.cx + u * std::cos(body.angle) - v * std::sin(body.angle),
                                      body.cy + u * std::sin(body.angle) + v * std::cos(body.angle)});
        }
        gt.regions.push_back(std::move(region));
    }

    for (int i = 0; i < params.clutter_level; ++i) {
        if (!place_blob(10, 22, 8, 16)) break;
        const Blob& blob = placed.back();
        int x0 = static_cast<int>(blob.cx - blob.a - 1), x1 = static_cast<int>(blob.cx + blob.a + 2);
        int y0 = static_cast<int>(blob.cy - blob.a - 1), y1 = static_cast<int>(blob.cy + blob.a + 2);
        for (int y = std::max(y0, 0); y < std::min(y1, H); ++y) {
            for (int x = std::max(x0, 0); x < std::min(x1, W); ++x) {
                if (inside_ellipse(blob, x, y)) clutter_color(rng, image.px(x, y));
            }
        }
    }

    return {std::move(image), std::move(gt)};
}

std::vector<RgbImage> generate_template_images(std::uint64_t seed, int count, int size) {
    std::vector<RgbImage> out;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed * 0xD1B54A32D192ED03ULL + static_cast<std::uint64_t>(i) + 17);
        RgbImage img(size, size);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) marking_color(rng, img.px(x, y));
        }
        out.push_back(std::move(img));
    }
    return out;
}

RgbImage generate_reference_image() {
    RgbImage img(96, 96);
    std::array<Vec2, 3> tri = marking_triangle(48.0, 48.0, 44.0, 0.0);
    for (int y = 0; y < 96; ++y) {
        for (int x = 0; x < 96; ++x) {
            if (inside_triangle(tri, x, y)) img.set(x, y, 255, 255, 255);
        }
    }
    return img;
}

std::string ground_truth_to_json(const GroundTruth& gt) {
    nlohmann::json j;
    j["regions"] = nlohmann::json::array();
    for (const auto& region : gt.regions) {
        nlohmann::json r;
        r["id"] = region.id;
        r["polygon"] = nlohmann::json::array();
        for (const auto& [x, y] : region.polygon) r["polygon"].push_back({x, y});
        j["regions"].push_back(std::move(r));
    }
    return j.dump(2);
}

GroundTruth ground_truth_from_json(const std::string& text) {
    GroundTruth gt;
    nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& r : j.at("regions")) {
        TruthRegion region;
        region.id = r.at("id").get<int>();
        for (const auto& p : r.at("polygon")) {
            region.polygon.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        if (region.polygon.size() < 3)
            throw std::invalid_argument("ground truth polygon needs >= 3 vertices");
        gt.regions.push_back(std::move(region));
    }
    return gt;
}

}  // namespace pyra
