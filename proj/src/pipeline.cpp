#include "pyra/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "pyra/color.hpp"
#include "pyra/imageio.hpp"
#include "pyra/segment.hpp"

namespace pyra {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

// Luma-free grayscale for reference images: channel maximum keeps any
// saturated foreground bright regardless of its hue.
GrayMap to_gray_max(const RgbImage& image) {
    GrayMap out(image.width, image.height);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const std::uint8_t* p = image.pixels.data() + i * 3;
        out.values[i] = std::max({p[0], p[1], p[2]});
    }
    return out;
}

HuSignature reference_signature(const RgbImage& image, const std::string& path) {
    GrayMap gray = to_gray_max(image);
    GrayHistogram hist = GrayHistogram::from_map(gray);
    GrayMap binary = binarize(gray, otsu(hist));
    auto contours = find_contours(binary);
    std::vector<Contour> outers;
    for (auto& c : contours) {
        if (c.kind == Contour::Kind::Outer && c.area > 0) outers.push_back(std::move(c));
    }
    if (outers.size() != 1) {
        throw LoadError("reference image " + path + " segments into " +
                        std::to_string(outers.size()) + " outer contours, expected exactly 1");
    }
    return hu_signature(region_moments(binary, outers.front()));
}

}  // namespace

LoadedTemplates load_templates(const std::vector<std::string>& template_paths,
                               const std::vector<std::string>& reference_paths,
                               const PipelineConfig& cfg) {
    if (template_paths.empty()) throw LoadError("no template images given");
    if (reference_paths.empty()) throw LoadError("no reference contour image given");

    LoadedTemplates out;
    for (const auto& path : template_paths) {
        RgbImage img;
        try {
            img = load_image(path);
        } catch (const std::exception& e) {
            throw LoadError("template " + path + ": " + e.what());
        }
        HsvImage hsv = rgb_to_hsv(img, cfg.hsv_mode);
        // windows are centered on a pixel: trim one row/column if even
        int w = img.width - (img.width % 2 == 0 ? 1 : 0);
        int h = img.height - (img.height % 2 == 0 ? 1 : 0);
        Template tmpl;
        tmpl.hist = h_histogram(hsv, {0, 0, w, h}, cfg.n_bins);
        tmpl.window_w = w;
        tmpl.window_h = h;
        out.templates.templates.push_back(std::move(tmpl));
    }
    for (const auto& path : reference_paths) {
        RgbImage img;
        try {
            img = load_image(path);
        } catch (const std::exception& e) {
            throw LoadError("reference " + path + ": " + e.what());
        }
        out.references.push_back(reference_signature(img, path));
    }
    return out;
}

namespace {

DetectResult run_detect(const RgbImage& image, const LoadedTemplates& loaded,
                        const PipelineConfig& cfg, const std::string* debug_dir) {
    DetectResult result;
    const auto t0 = Clock::now();

    HsvImage hsv = rgb_to_hsv(image, cfg.hsv_mode);
    const auto t1 = Clock::now();

    std::vector<ProbabilityMap> maps;
    maps.reserve(loaded.templates.templates.size());
    for (const auto& tmpl : loaded.templates.templates) {
        maps.push_back(backproject_single(hsv, tmpl, cfg.stride));
    }
    const auto t2 = Clock::now();

    GrayMap fused = fuse_templates(maps, cfg.normalize_fusion);
    GrayMap eroded = erode(fused, cfg.erosion_iterations);
    const auto t3 = Clock::now();

    GrayHistogram hist = GrayHistogram::from_map(eroded);
    ThresholdResult thr = constrained_otsu(hist, cfg.otsu_lower);
    int threshold = std::max(thr.g_optimal, cfg.prob_threshold_floor);
    GrayMap binary = binarize(eroded, threshold);
    const auto t4 = Clock::now();

    auto contours = find_contours(binary);
    double min_area = cfg.min_area_frac * image.width * image.height;
    auto kept = filter_contours(contours, min_area, cfg.min_perimeter);
    const auto t5 = Clock::now();

    for (const auto& contour : kept) {
        if (contour.points.size() < 3) continue;
        HuSignature sig = hu_signature(region_moments(binary, contour));
        double best_sim = -1.0;
        int best_ref = 0;
        for (std::size_t r = 0; r < loaded.references.size(); ++r) {
            double s = shape_similarity(sig, loaded.references[r]);
            if (s > best_sim) {
                best_sim = s;
                best_ref = static_cast<int>(r);
            }
        }
        if (best_sim <= cfg.match_threshold) continue;  // delete the failed contour
        auto triangle = approx_triangle(contour, cfg.epsilon_frac);
        if (!triangle) continue;
        result.detections.push_back({*triangle, best_sim, contour.area, best_ref});
    }
    const auto t6 = Clock::now();

    for (const auto& det : result.detections) {
        result.frame_similarity = std::max(result.frame_similarity, det.similarity);
    }

    result.timing.hsv_ms = ms_between(t0, t1);
    result.timing.backproject_ms = ms_between(t1, t2);
    result.timing.fuse_erode_ms = ms_between(t2, t3);
    result.timing.threshold_ms = ms_between(t3, t4);
    result.timing.contour_ms = ms_between(t4, t5);
    result.timing.match_ms = ms_between(t5, t6);
    result.timing.total_ms = ms_between(t0, t6);

    if (debug_dir) {
        for (std::size_t i = 0; i < maps.size(); ++i) {
            GrayMap q = fuse_templates({maps[i]}, true);
            save_png(*debug_dir + "/map_" + std::to_string(i) + ".png", q);
        }
        save_png(*debug_dir + "/fused.png", fused);
        save_png(*debug_dir + "/eroded.png", eroded);
        save_png(*debug_dir + "/binary.png", binary);
    }
    return result;
}

}  // namespace

DetectResult detect(const RgbImage& image, const LoadedTemplates& loaded,
                    const PipelineConfig& cfg) {
    return run_detect(image, loaded, cfg, nullptr);
}

DetectResult detect_debug(const RgbImage& image, const LoadedTemplates& loaded,
                          const PipelineConfig& cfg, const std::string& debug_dir) {
    return run_detect(image, loaded, cfg, &debug_dir);
}

namespace {

// 5x7 glyphs for "0123456789."
constexpr std::uint8_t kGlyphs[11][7] = {
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C},  // .
};

void draw_glyph(RgbImage& img, int ox, int oy, int glyph) {
    for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
            if ((kGlyphs[glyph][row] >> (4 - col)) & 1) {
                int x = ox + col, y = oy + row;
                if (x >= 0 && x < img.width && y >= 0 && y < img.height) {
                    img.set(x, y, 255, 255, 255);
                }
            }
        }
    }
}

void draw_text(RgbImage& img, int ox, int oy, const std::string& text) {
    for (char c : text) {
        int glyph = c == '.' ? 10 : c - '0';
        if (glyph < 0 || glyph > 10) continue;
        draw_glyph(img, ox, oy, glyph);
        ox += 6;
    }
}

void draw_line(RgbImage& img, Point a, Point b) {
    int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x, y = a.y;
    while (true) {
        if (x >= 0 && x < img.width && y >= 0 && y < img.height) img.set(x, y, 255, 0, 0);
        if (x == b.x && y == b.y) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

}  // namespace

RgbImage annotate(const RgbImage& image, const std::vector<Detection>& detections) {
    RgbImage out = image;
    for (const auto& det : detections) {
        draw_line(out, det.triangle.v1, det.triangle.v2);
        draw_line(out, det.triangle.v2, det.triangle.v3);
        draw_line(out, det.triangle.v3, det.triangle.v1);

        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", det.similarity);
        int tx = std::min({det.triangle.v1.x, det.triangle.v2.x, det.triangle.v3.x});
        int ty = std::min({det.triangle.v1.y, det.triangle.v2.y, det.triangle.v3.y}) - 9;
        draw_text(out, std::max(tx, 0), std::max(ty, 0), buf);
    }
    return out;
}

std::string detection_to_json(const Detection& det, const std::string& frame, double elapsed_ms) {
    nlohmann::json j;
    j["frame"] = frame;
    j["vertices"] = {{det.triangle.v1.x, det.triangle.v1.y},
                     {det.triangle.v2.x, det.triangle.v2.y},
                     {det.triangle.v3.x, det.triangle.v3.y}};
    j["similarity"] = det.similarity;
    j["area"] = det.contour_area;
    j["template_id"] = det.template_id;
    j["elapsed_ms"] = elapsed_ms;
    return j.dump();
}

}  // namespace pyra
