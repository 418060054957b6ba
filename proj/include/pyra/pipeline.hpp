#pragma once

#include <string>
#include <vector>

#include "pyra/backproject.hpp"
#include "pyra/config.hpp"
#include "pyra/contour.hpp"
#include "pyra/image.hpp"
#include "pyra/moments.hpp"

namespace pyra {

struct Detection {
    Triangle triangle;
    double similarity = 0.0;
    double contour_area = 0.0;
    int template_id = 0;  // index of the best-matching reference contour
};

struct StageTiming {
    double hsv_ms = 0.0;
    double backproject_ms = 0.0;
    double fuse_erode_ms = 0.0;
    double threshold_ms = 0.0;
    double contour_ms = 0.0;
    double match_ms = 0.0;
    double total_ms = 0.0;
};

struct DetectResult {
    std::vector<Detection> detections;
    double frame_similarity = 0.0;  // max detection similarity, 0 if none
    StageTiming timing;
};

struct LoadedTemplates {
    TemplateSet templates;
    std::vector<HuSignature> references;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Builds per-template H histograms (window = template dims, trimmed to odd)
// and the reference contour signature(s) from the reference image, which
// must segment into exactly one outer contour per image.
LoadedTemplates load_templates(const std::vector<std::string>& template_paths,
                               const std::vector<std::string>& reference_paths,
                               const PipelineConfig& cfg);

DetectResult detect(const RgbImage& image, const LoadedTemplates& loaded,
                    const PipelineConfig& cfg);

// Optional per-stage debug dumps (grayscale PNGs) written under `dir`.
DetectResult detect_debug(const RgbImage& image, const LoadedTemplates& loaded,
                          const PipelineConfig& cfg, const std::string& debug_dir);

// Draws triangle edges and the similarity value ("0.86"-style) onto a copy.
RgbImage annotate(const RgbImage& image, const std::vector<Detection>& detections);

// JSON-lines record for one detection.
std::string detection_to_json(const Detection& det, const std::string& frame, double elapsed_ms);

}  // namespace pyra
