#pragma once

#include <map>
#include <string>

#include "pyra/color.hpp"
#include "pyra/segment.hpp"

namespace pyra {

enum class MatchRule {
    Centroid,  // detection centroid inside the truth polygon
    Iou,       // triangle/polygon IoU >= 0.3
};

// Every paper-silent constant, inspectable and overridable.
struct PipelineConfig {
    int n_bins = 256;
    HsvMode hsv_mode = HsvMode::Paper;
    int stride = 1;
    int erosion_iterations = 1;
    bool normalize_fusion = true;
    double min_area_frac = 0.0005;
    double min_perimeter = 0.0;
    double epsilon_frac = 0.02;
    double match_threshold = 0.7;
    OtsuLower otsu_lower = OtsuLower::Argmax;
    int prob_threshold_floor = 0;  // floor under the constrained-Otsu result

    // controller bands
    double slow_band_low = 0.7;
    double stop_threshold = 0.9;
    int alarm_consecutive = 5;
    double base_speed = 0.56;

    // evaluation
    MatchRule match_rule = MatchRule::Centroid;
    double iou_threshold = 0.3;
};

// Flat key=value file, '#' comments. Unknown keys are an error.
PipelineConfig parse_config_file(const std::string& path);
PipelineConfig parse_config_text(const std::string& text);

// Applies a single "key=value" override on top of an existing config.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

std::string config_to_text(const PipelineConfig& cfg);

}  // namespace pyra
