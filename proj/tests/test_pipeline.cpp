#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "pyra/eval.hpp"
#include "pyra/imageio.hpp"
#include "pyra/pipeline.hpp"

using namespace pyra;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pyra_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// Writes generator templates + reference to disk, returns their paths.
struct Fixture {
    TempDir dir;
    std::vector<std::string> template_paths;
    std::string reference_path;

    Fixture() {
        auto templates = generate_template_images(7);
        for (std::size_t i = 0; i < templates.size(); ++i) {
            std::string p = (dir.path / ("tmpl_" + std::to_string(i) + ".png")).string();
            save_png(p, templates[i]);
            template_paths.push_back(p);
        }
        reference_path = (dir.path / "reference.png").string();
        save_png(reference_path, generate_reference_image());
    }
};

// Same canonical marking shape the generator stamps, about its centroid.
constexpr double kBaseTri[3][2] = {
    {-0.71625, -0.54258}, {0.97671, -0.21703}, {-0.26046, 0.75961}};

RgbImage planted_scene(double cx, double cy, double scale, std::uint32_t seed) {
    RgbImage img(320, 240);
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> jit(-10, 10);
    for (int y = 0; y < 240; ++y)
        for (int x = 0; x < 320; ++x)
            img.set(x, y, static_cast<std::uint8_t>(55 + jit(gen)),
                    static_cast<std::uint8_t>(140 + jit(gen)),
                    static_cast<std::uint8_t>(45 + jit(gen)));

    double ax = cx + scale * kBaseTri[0][0], ay = cy + scale * kBaseTri[0][1];
    double bx = cx + scale * kBaseTri[1][0], by = cy + scale * kBaseTri[1][1];
    double tx = cx + scale * kBaseTri[2][0], ty = cy + scale * kBaseTri[2][1];
    auto side = [&](double x1, double y1, double x2, double y2, double px, double py) {
        return (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1);
    };
    for (int y = 0; y < 240; ++y)
        for (int x = 0; x < 320; ++x) {
            double s0 = side(ax, ay, bx, by, x, y), s1 = side(bx, by, tx, ty, x, y),
                   s2 = side(tx, ty, ax, ay, x, y);
            if ((s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0))
                img.set(x, y, static_cast<std::uint8_t>(200 + jit(gen) / 2),
                        static_cast<std::uint8_t>(140 + jit(gen) / 2),
                        static_cast<std::uint8_t>(40 + jit(gen) / 2));
        }
    return img;
}

}  // namespace

TEST_CASE("load_templates: 3 valid templates give M=3") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);
    CHECK(loaded.templates.count() == 3);
    REQUIRE(loaded.references.size() == 1);
    CHECK(loaded.references[0].phi[0] > 0.0);
    for (const auto& t : loaded.templates.templates) {
        CHECK(t.window_w % 2 == 1);
        CHECK(t.window_h % 2 == 1);
    }
}

TEST_CASE("load_templates error cases") {
    Fixture fx;
    PipelineConfig cfg;
    CHECK_THROWS_AS(load_templates({}, {fx.reference_path}, cfg), LoadError);
    CHECK_THROWS_AS(load_templates(fx.template_paths, {}, cfg), LoadError);
    CHECK_THROWS_AS(
        load_templates({(fx.dir.path / "missing.png").string()}, {fx.reference_path}, cfg),
        LoadError);

    // reference with two separate blobs: not exactly one outer contour
    RgbImage bad(64, 64);
    for (int y = 10; y < 20; ++y)
        for (int x = 10; x < 20; ++x) bad.set(x, y, 255, 255, 255);
    for (int y = 40; y < 50; ++y)
        for (int x = 40; x < 50; ++x) bad.set(x, y, 255, 255, 255);
    std::string bad_path = (fx.dir.path / "bad_ref.png").string();
    save_png(bad_path, bad);
    CHECK_THROWS_AS(load_templates(fx.template_paths, {bad_path}, cfg), LoadError);
}

TEST_CASE("reference signature matches a direct moments computation") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);

    RgbImage ref = load_image(fx.reference_path);
    GrayMap mask(ref.width, ref.height);
    for (int y = 0; y < ref.height; ++y)
        for (int x = 0; x < ref.width; ++x)
            if (ref.px(x, y)[0] > 128) mask.at(x, y) = 255;
    auto cs = find_contours(mask);
    REQUIRE(cs.size() == 1);
    HuSignature direct = hu_signature(region_moments(mask, cs[0]));
    CHECK(shape_similarity(direct, loaded.references[0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("detect finds a planted marking within 5 px of its corners") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);

    const double cx = 150, cy = 120, scale = 34;
    RgbImage scene = planted_scene(cx, cy, scale, 9001);
    DetectResult res = detect(scene, loaded, cfg);
    REQUIRE(res.detections.size() == 1);
    CHECK(res.frame_similarity == doctest::Approx(res.detections[0].similarity));
    CHECK(res.detections[0].similarity > cfg.match_threshold);

    for (Point v : {res.detections[0].triangle.v1, res.detections[0].triangle.v2,
                    res.detections[0].triangle.v3}) {
        CHECK(v.x >= 0);
        CHECK(v.x < scene.width);
        CHECK(v.y >= 0);
        CHECK(v.y < scene.height);
        double best = 1e9;
        for (const auto& c : kBaseTri)
            best = std::min(best, std::hypot(v.x - (cx + scale * c[0]), v.y - (cy + scale * c[1])));
        CHECK(best <= 5.0);
    }
}

TEST_CASE("pure green field yields no detections and similarity 0") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);
    RgbImage green(160, 120);
    for (int y = 0; y < 120; ++y)
        for (int x = 0; x < 160; ++x) green.set(x, y, 40, 150, 40);
    DetectResult res = detect(green, loaded, cfg);
    CHECK(res.detections.empty());
    CHECK(res.frame_similarity == 0.0);
}

TEST_CASE("detect is deterministic and timing is consistent") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);
    auto [scene, gt] = generate_scene(5, {2, 320, 240, 2});

    DetectResult a = detect(scene, loaded, cfg);
    DetectResult b = detect(scene, loaded, cfg);
    REQUIRE(a.detections.size() == b.detections.size());
    CHECK(a.frame_similarity == b.frame_similarity);
    for (std::size_t i = 0; i < a.detections.size(); ++i) {
        CHECK(a.detections[i].triangle.v1 == b.detections[i].triangle.v1);
        CHECK(a.detections[i].similarity == b.detections[i].similarity);
    }
    CHECK((a.frame_similarity == 0.0) == a.detections.empty());

    double stage_sum = a.timing.hsv_ms + a.timing.backproject_ms + a.timing.fuse_erode_ms +
                       a.timing.threshold_ms + a.timing.contour_ms + a.timing.match_ms;
    CHECK(stage_sum >= 0.0);
    CHECK(std::abs(stage_sum - a.timing.total_ms) <= 0.05 * a.timing.total_ms);
}

TEST_CASE("annotate leaves untouched pixels intact") {
    Fixture fx;
    PipelineConfig cfg;
    auto loaded = load_templates(fx.template_paths, {fx.reference_path}, cfg);
    RgbImage scene = planted_scene(150, 120, 34, 77);

    CHECK(annotate(scene, {}) == scene);  // no detections: pixel-identical

    DetectResult res = detect(scene, loaded, cfg);
    REQUIRE(!res.detections.empty());
    RgbImage marked = annotate(scene, res.detections);
    CHECK(annotate(scene, res.detections) == marked);  // deterministic
    int diff = 0;
    for (std::size_t i = 0; i < scene.pixels.size(); ++i)
        if (scene.pixels[i] != marked.pixels[i]) ++diff;
    CHECK(diff > 0);
    CHECK(diff < static_cast<int>(scene.pixels.size()) / 10);  // sparse overlay
}

TEST_CASE("detection json record carries the documented fields") {
    Detection det;
    det.triangle = {{10, 20}, {30, 40}, {50, 60}};
    det.similarity = 0.86;
    det.contour_area = 123.5;
    det.template_id = 0;
    auto j = nlohmann::json::parse(detection_to_json(det, "frame_0001", 12.5));
    CHECK(j.at("frame") == "frame_0001");
    CHECK(j.at("vertices").size() == 3);
    CHECK(j.at("vertices")[0][0] == 10);
    CHECK(j.at("similarity") == doctest::Approx(0.86));
    CHECK(j.at("area") == doctest::Approx(123.5));
    CHECK(j.at("template_id") == 0);
    CHECK(j.at("elapsed_ms") == doctest::Approx(12.5));
}
