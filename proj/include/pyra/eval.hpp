#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pyra/config.hpp"
#include "pyra/image.hpp"
#include "pyra/pipeline.hpp"

namespace pyra {

struct TruthRegion {
    int id = 0;
    std::vector<std::pair<double, double>> polygon;  // convex, >= 3 vertices
};

struct GroundTruth {
    std::vector<TruthRegion> regions;
};

struct MatchAssignment {
    int matched = 0;                 // truth regions matched
    std::vector<int> detection_to_truth;  // truth index per detection, -1 unmatched
};

struct ImageCounts {
    std::string stem;
    int n = 0;        // truth count
    int x = 0;        // marked contours
    int matched = 0;
    double elapsed_ms = 0.0;
};

struct MetricsReport {
    double beta = 0.0;
    double delta = 0.0;
    std::uint64_t n = 0;
    std::uint64_t x = 0;
    std::uint64_t matched = 0;
    double mean_elapsed_ms = 0.0;
    std::vector<ImageCounts> per_image;
};

// Greedy by descending similarity; each truth region matched at most once.
MatchAssignment match_detections(const GroundTruth& gt, const std::vector<Detection>& detections,
                                 MatchRule rule = MatchRule::Centroid, double iou_threshold = 0.3);

double recognition_rate(std::uint64_t matched, std::uint64_t n);
double false_alarm_rate(std::uint64_t matched, std::uint64_t x);

// Micro-averaged report over per-image counts. Images with n == 0
// contribute to delta only.
MetricsReport aggregate(const std::vector<ImageCounts>& per_image);

struct SceneParams {
    int n_insects = 1;
    int width = 320;
    int height = 240;
    int clutter_level = 0;  // hue-near distractor blobs without truth entries
};

// Deterministic synthetic farm scene: green textured background, insects
// as elliptical bodies carrying a triangular wing marking in the template
// hue band, truth polygons tightly bounding each body.
std::pair<RgbImage, GroundTruth> generate_scene(std::uint64_t seed, const SceneParams& params);

// Template crops of the marking texture plus a filled-triangle reference
// image, matching generate_scene's hue band.
std::vector<RgbImage> generate_template_images(std::uint64_t seed, int count = 3, int size = 5);
RgbImage generate_reference_image();

std::string ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const std::string& text);

}  // namespace pyra
