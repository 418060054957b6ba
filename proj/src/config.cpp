#include "pyra/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pyra {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

void check_range(bool ok, const std::string& key) {
    if (!ok) throw std::invalid_argument("config: value out of range for " + key);
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n_bins") {
        cfg.n_bins = to_int(key, value);
        check_range(cfg.n_bins >= 2 && cfg.n_bins <= 256, key);
    } else if (key == "hsv_mode") {
        if (value == "paper") cfg.hsv_mode = HsvMode::Paper;
        else if (value == "standard") cfg.hsv_mode = HsvMode::Standard;
        else throw std::invalid_argument("config: hsv_mode must be paper|standard");
    } else if (key == "stride") {
        cfg.stride = to_int(key, value);
        check_range(cfg.stride >= 1, key);
    } else if (key == "erosion_iterations") {
        cfg.erosion_iterations = to_int(key, value);
        check_range(cfg.erosion_iterations >= 0, key);
    } else if (key == "normalize_fusion") {
        cfg.normalize_fusion = to_bool(key, value);
    } else if (key == "min_area_frac") {
        cfg.min_area_frac = to_double(key, value);
        check_range(cfg.min_area_frac >= 0.0 && cfg.min_area_frac < 1.0, key);
    } else if (key == "min_perimeter") {
        cfg.min_perimeter = to_double(key, value);
        check_range(cfg.min_perimeter >= 0.0, key);
    } else if (key == "epsilon_frac") {
        cfg.epsilon_frac = to_double(key, value);
        check_range(cfg.epsilon_frac > 0.0 && cfg.epsilon_frac < 1.0, key);
    } else if (key == "match_threshold") {
        cfg.match_threshold = to_double(key, value);
        check_range(cfg.match_threshold >= 0.0 && cfg.match_threshold <= 1.0, key);
    } else if (key == "otsu_lower") {
        if (value == "argmax") cfg.otsu_lower = OtsuLower::Argmax;
        else if (value == "midpoint") cfg.otsu_lower = OtsuLower::Midpoint;
        else throw std::invalid_argument("config: otsu_lower must be argmax|midpoint");
    } else if (key == "prob_threshold_floor") {
        cfg.prob_threshold_floor = to_int(key, value);
        check_range(cfg.prob_threshold_floor >= 0 && cfg.prob_threshold_floor <= 255, key);
    } else if (key == "slow_band_low") {
        cfg.slow_band_low = to_double(key, value);
        check_range(cfg.slow_band_low >= 0.0 && cfg.slow_band_low <= 1.0, key);
    } else if (key == "stop_threshold") {
        cfg.stop_threshold = to_double(key, value);
        check_range(cfg.stop_threshold >= 0.0 && cfg.stop_threshold <= 1.0, key);
    } else if (key == "alarm_consecutive") {
        cfg.alarm_consecutive = to_int(key, value);
        check_range(cfg.alarm_consecutive >= 1, key);
    } else if (key == "base_speed") {
        cfg.base_speed = to_double(key, value);
        check_range(cfg.base_speed > 0.0, key);
    } else if (key == "match_rule") {
        if (value == "centroid") cfg.match_rule = MatchRule::Centroid;
        else if (value == "iou") cfg.match_rule = MatchRule::Iou;
        else throw std::invalid_argument("config: match_rule must be centroid|iou");
    } else if (key == "iou_threshold") {
        cfg.iou_threshold = to_double(key, value);
        check_range(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0, key);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "n_bins=" << cfg.n_bins << "\n";
    out << "hsv_mode=" << (cfg.hsv_mode == HsvMode::Paper ? "paper" : "standard") << "\n";
    out << "stride=" << cfg.stride << "\n";
    out << "erosion_iterations=" << cfg.erosion_iterations << "\n";
    out << "normalize_fusion=" << (cfg.normalize_fusion ? "true" : "false") << "\n";
    out << "min_area_frac=" << cfg.min_area_frac << "\n";
    out << "min_perimeter=" << cfg.min_perimeter << "\n";
    out << "epsilon_frac=" << cfg.epsilon_frac << "\n";
    out << "match_threshold=" << cfg.match_threshold << "\n";
    out << "otsu_lower=" << (cfg.otsu_lower == OtsuLower::Argmax ? "argmax" : "midpoint") << "\n";
    out << "prob_threshold_floor=" << cfg.prob_threshold_floor << "\n";
    out << "slow_band_low=" << cfg.slow_band_low << "\n";
    out << "stop_threshold=" << cfg.stop_threshold << "\n";
    out << "alarm_consecutive=" << cfg.alarm_consecutive << "\n";
    out << "base_speed=" << cfg.base_speed << "\n";
    out << "match_rule=" << (cfg.match_rule == MatchRule::Centroid ? "centroid" : "iou") << "\n";
    out << "iou_threshold=" << cfg.iou_threshold << "\n";
    return out.str();
}

}  // namespace pyra
