// Command-line front end: batch detection, evaluation, controller
// simulation and synthetic scene generation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pyra/controller.hpp"
#include "pyra/eval.hpp"
#include "pyra/imageio.hpp"
#include "pyra/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

// exit codes (sysexits-style where applicable)
constexpr int kExitOk = 0;
constexpr int kExitPartialInput = 2;
constexpr int kExitAlarm = 3;
constexpr int kExitUsage = 64;
constexpr int kExitDataErr = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitCantCreate = 73;

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

pyra::PipelineConfig resolve_config(const std::string& config_path,
                                    const std::vector<std::string>& overrides, int stride_flag) {
    pyra::PipelineConfig cfg;
    if (!config_path.empty()) cfg = pyra::parse_config_file(config_path);
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value: " + kv);
        pyra::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (stride_flag > 0) pyra::apply_config_entry(cfg, "stride", std::to_string(stride_flag));
    return cfg;
}

int cmd_detect(const std::string& config_path, const std::string& templates_dir,
               const std::string& reference_path, const std::string& input_dir,
               const std::string& out_dir, bool annotate_flag, int stride_flag,
               const std::vector<std::string>& overrides, const std::string& debug_dir) {
    pyra::PipelineConfig cfg;
    try {
        cfg = resolve_config(config_path, overrides, stride_flag);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<std::string> template_paths;
    if (!fs::is_directory(templates_dir)) {
        std::cerr << "error: template directory not found: " << templates_dir << "\n";
        return kExitNoInput;
    }
    for (const auto& p : list_images(templates_dir)) template_paths.push_back(p.string());
    if (template_paths.empty() || !fs::exists(reference_path)) {
        std::cerr << "error: no templates in " << templates_dir << " or missing reference "
                  << reference_path << "\n";
        return kExitNoInput;
    }

    pyra::LoadedTemplates loaded;
    try {
        loaded = pyra::load_templates(template_paths, {reference_path}, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoInput;
    }

    if (!fs::is_directory(input_dir)) {
        std::cerr << "error: input directory not found: " << input_dir << "\n";
        return kExitUsage;
    }
    auto inputs = list_images(input_dir);
    if (inputs.empty()) std::cerr << "warning: no input images in " << input_dir << "\n";

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream jsonl(fs::path(out_dir) / "detections.jsonl");
    if (!jsonl) {
        std::cerr << "error: cannot write to " << out_dir << "\n";
        return kExitCantCreate;
    }

    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["config"] = pyra::config_to_text(cfg);
    manifest["templates"] = template_paths;
    manifest["reference"] = reference_path;
    manifest["inputs"] = json::array();
    manifest["frames"] = json::array();

    bool any_unreadable = false;
    for (const auto& path : inputs) {
        manifest["inputs"].push_back(path.string());
        std::string stem = path.stem().string();
        pyra::RgbImage image;
        try {
            image = pyra::load_image(path.string());
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping unreadable input " << path << ": " << e.what() << "\n";
            any_unreadable = true;
            continue;
        }
        pyra::DetectResult res = debug_dir.empty()
                                     ? pyra::detect(image, loaded, cfg)
                                     : pyra::detect_debug(image, loaded, cfg, debug_dir);
        for (const auto& det : res.detections) {
            jsonl << pyra::detection_to_json(det, stem, res.timing.total_ms) << "\n";
        }
        if (annotate_flag) {
            pyra::RgbImage ann = pyra::annotate(image, res.detections);
            fs::create_directories(fs::path(out_dir) / "annotated", ec);
            pyra::save_png((fs::path(out_dir) / "annotated" / (stem + ".png")).string(), ann);
        }
        json frame;
        frame["file"] = path.string();
        frame["detections"] = res.detections.size();
        frame["frame_similarity"] = res.frame_similarity;
        frame["elapsed_ms"] = res.timing.total_ms;
        manifest["frames"].push_back(std::move(frame));
    }

    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
    return any_unreadable ? kExitPartialInput : kExitOk;
}

int cmd_eval(const std::string& detections_path, const std::string& truth_dir,
             const std::string& config_path, const std::vector<std::string>& overrides) {
    pyra::PipelineConfig cfg;
    try {
        cfg = resolve_config(config_path, overrides, 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ifstream in(detections_path);
    if (!in) {
        std::cerr << "error: cannot open " << detections_path << "\n";
        return kExitUsage;
    }

    // group detection records by frame stem, preserving first-seen order
    std::map<std::string, std::vector<pyra::Detection>> by_stem;
    std::map<std::string, double> elapsed_by_stem;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            std::cerr << "error: malformed detection line: " << e.what() << "\n";
            return kExitDataErr;
        }
        pyra::Detection det;
        auto v = j.at("vertices");
        det.triangle = {{v[0][0], v[0][1]}, {v[1][0], v[1][1]}, {v[2][0], v[2][1]}};
        det.similarity = j.at("similarity");
        det.contour_area = j.at("area");
        det.template_id = j.at("template_id");
        std::string stem = j.at("frame");
        by_stem[stem].push_back(det);
        elapsed_by_stem[stem] = j.at("elapsed_ms");
    }

    std::map<std::string, pyra::GroundTruth> truths;
    if (!fs::is_directory(truth_dir)) {
        std::cerr << "error: truth directory not found: " << truth_dir << "\n";
        return kExitUsage;
    }
    for (const auto& entry : fs::directory_iterator(truth_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        std::ifstream tf(entry.path());
        std::stringstream ss;
        ss << tf.rdbuf();
        try {
            truths[entry.path().stem().string()] = pyra::ground_truth_from_json(ss.str());
        } catch (const std::exception& e) {
            std::cerr << "error: bad annotation " << entry.path() << ": " << e.what() << "\n";
            return kExitDataErr;
        }
    }

    std::vector<std::string> unmatched;
    for (const auto& [stem, dets] : by_stem) {
        if (!truths.count(stem)) unmatched.push_back(stem);
    }
    if (!unmatched.empty()) {
        std::cerr << "error: detection frames without annotations:";
        for (const auto& s : unmatched) std::cerr << " " << s;
        std::cerr << "\n";
        return kExitDataErr;
    }

    std::vector<pyra::ImageCounts> per_image;
    for (const auto& [stem, gt] : truths) {
        pyra::ImageCounts counts;
        counts.stem = stem;
        counts.n = static_cast<int>(gt.regions.size());
        auto it = by_stem.find(stem);
        const std::vector<pyra::Detection> empty;
        const auto& dets = it == by_stem.end() ? empty : it->second;
        counts.x = static_cast<int>(dets.size());
        counts.matched =
            pyra::match_detections(gt, dets, cfg.match_rule, cfg.iou_threshold).matched;
        auto et = elapsed_by_stem.find(stem);
        counts.elapsed_ms = et == elapsed_by_stem.end() ? 0.0 : et->second;
        per_image.push_back(std::move(counts));
    }

    pyra::MetricsReport rep = pyra::aggregate(per_image);

    json out;
    out["beta"] = rep.beta;
    out["delta"] = rep.delta;
    out["n"] = rep.n;
    out["x"] = rep.x;
    out["matched"] = rep.matched;
    out["mean_elapsed_ms"] = rep.mean_elapsed_ms;
    out["per_image"] = json::array();
    for (const auto& img : rep.per_image) {
        out["per_image"].push_back({{"stem", img.stem},
                                    {"n", img.n},
                                    {"x", img.x},
                                    {"matched", img.matched},
                                    {"elapsed_ms", img.elapsed_ms}});
    }
    std::cout << out.dump(2) << "\n";

    char table[256];
    std::snprintf(table, sizeof(table),
                  "accuracy %%: %.1f | false alarm %%: %.1f | mean seconds: %.3f",
                  rep.beta * 100.0, rep.delta * 100.0, rep.mean_elapsed_ms / 1000.0);
    std::cerr << table << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& stream_path, const std::string& out_path,
                 const std::string& config_path, const std::vector<std::string>& overrides) {
    pyra::PipelineConfig cfg;
    try {
        cfg = resolve_config(config_path, overrides, 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ifstream in(stream_path);
    if (!in) {
        std::cerr << "error: cannot open " << stream_path << "\n";
        return kExitUsage;
    }

    std::vector<double> similarities;
    std::string line;
    bool jsonl_mode = false;
    std::vector<std::string> frame_order;
    std::map<std::string, double> frame_max;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && !line.empty() && line[0] == '{') jsonl_mode = true;
        if (jsonl_mode) {
            try {
                json j = json::parse(line);
                std::string stem = j.at("frame");
                double s = j.at("similarity");
                if (!frame_max.count(stem)) frame_order.push_back(stem);
                frame_max[stem] = std::max(frame_max[stem], s);
            } catch (const std::exception& e) {
                std::cerr << "error: malformed stream line " << lineno << ": " << e.what() << "\n";
                return kExitDataErr;
            }
        } else {
            try {
                // accept "value" or "frame,value" rows
                auto comma = line.rfind(',');
                std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
                std::size_t pos = 0;
                double s = std::stod(field, &pos);
                if (pos != field.size() || s < 0.0 || s > 1.0) throw std::invalid_argument(field);
                similarities.push_back(s);
            } catch (const std::exception&) {
                std::cerr << "error: malformed stream line " << lineno << ": '" << line << "'\n";
                return kExitDataErr;
            }
        }
    }
    if (jsonl_mode) {
        for (const auto& stem : frame_order) similarities.push_back(frame_max[stem]);
    }

    std::ostream* out = &std::cout;
    std::ofstream file_out;
    if (!out_path.empty()) {
        file_out.open(out_path);
        if (!file_out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitCantCreate;
        }
        out = &file_out;
    }

    pyra::ControllerParams params{cfg.slow_band_low, cfg.stop_threshold, cfg.alarm_consecutive};
    pyra::ControllerState state = pyra::make_controller(cfg.base_speed);
    bool any_alarm = false;

    *out << "frame,similarity,mode,v1,v2,v3,v4,alarm\n";
    for (std::size_t i = 0; i < similarities.size(); ++i) {
        auto [next, events] = pyra::step(state, similarities[i], static_cast<long>(i), params);
        bool alarm = std::any_of(events.begin(), events.end(), [](const pyra::ControlEvent& e) {
            return e.kind == pyra::ControlEvent::Kind::Alarm;
        });
        any_alarm = any_alarm || alarm;
        char row[160];
        std::snprintf(row, sizeof(row), "%zu,%.6f,%s,%.6f,%.6f,%.6f,%.6f,%d\n", i, similarities[i],
                      pyra::mode_name(next.mode), next.motor_speeds[0], next.motor_speeds[1],
                      next.motor_speeds[2], next.motor_speeds[3], alarm ? 1 : 0);
        *out << row;
        state = next;
    }
    return any_alarm ? kExitAlarm : kExitOk;
}

int cmd_generate(std::uint64_t seed, int count, const std::string& size_str,
                 const std::string& out_dir, bool force, bool emit_templates, int max_insects,
                 int clutter) {
    int width = 0, height = 0;
    if (std::sscanf(size_str.c_str(), "%dx%d", &width, &height) != 2 || width < 64 || height < 64) {
        std::cerr << "error: --size expects WxH with both >= 64\n";
        return kExitUsage;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        std::cerr << "error: cannot create output directory " << out_dir << "\n";
        return kExitCantCreate;
    }

    // refuse to clobber existing outputs unless forced
    for (int i = 0; i < count; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "scene_%04d.png", i);
        if (!force && fs::exists(fs::path(out_dir) / name)) {
            std::cerr << "error: " << name << " exists in " << out_dir
                      << " (use --force to overwrite)\n";
            return kExitCantCreate;
        }
    }

    for (int i = 0; i < count; ++i) {
        std::uint64_t scene_seed = seed + static_cast<std::uint64_t>(i);
        pyra::SceneParams params;
        params.width = width;
        params.height = height;
        params.n_insects = 1 + static_cast<int>(scene_seed % static_cast<std::uint64_t>(max_insects));
        params.clutter_level = clutter;
        auto [image, gt] = pyra::generate_scene(scene_seed, params);

        char stem[64];
        std::snprintf(stem, sizeof(stem), "scene_%04d", i);
        try {
            pyra::save_png((fs::path(out_dir) / (std::string(stem) + ".png")).string(), image);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitCantCreate;
        }
        std::ofstream jf(fs::path(out_dir) / (std::string(stem) + ".json"));
        jf << pyra::ground_truth_to_json(gt) << "\n";
    }

    if (emit_templates) {
        fs::path tdir = fs::path(out_dir) / "templates";
        fs::create_directories(tdir, ec);
        auto templates = pyra::generate_template_images(seed);
        for (std::size_t i = 0; i < templates.size(); ++i) {
            pyra::save_png((tdir / ("tmpl_" + std::to_string(i) + ".png")).string(), templates[i]);
        }
        pyra::save_png((fs::path(out_dir) / "reference.png").string(),
                       pyra::generate_reference_image());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pyralidae pest detection pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, templates_dir, reference_path, input_dir, out_dir, debug_dir;
    std::vector<std::string> overrides;
    bool annotate_flag = false;
    int stride_flag = 0;

    auto* detect = app.add_subcommand("detect", "run detection over a directory of images");
    detect->add_option("--config", config_path, "flat key=value config file");
    detect->add_option("--templates", templates_dir, "directory of template images")->required();
    detect->add_option("--reference", reference_path, "reference contour image")->required();
    detect->add_option("--input", input_dir, "input image directory")->required();
    detect->add_option("--out", out_dir, "output directory")->required();
    detect->add_flag("--annotate", annotate_flag, "write annotated PNGs");
    detect->add_option("--stride", stride_flag, "scan stride override");
    detect->add_option("--set", overrides, "config override key=value");
    detect->add_option("--debug-dir", debug_dir, "dump per-stage probability maps");

    std::string detections_path, truth_dir;
    auto* eval = app.add_subcommand("eval", "score detections against ground truth");
    eval->add_option("--detections", detections_path, "detections.jsonl")->required();
    eval->add_option("--truth", truth_dir, "annotation JSON directory")->required();
    eval->add_option("--config", config_path, "flat key=value config file");
    eval->add_option("--set", overrides, "config override key=value");

    std::string stream_path, transcript_path;
    auto* simulate = app.add_subcommand("simulate", "replay a similarity stream through the arm controller");
    simulate->add_option("--stream", stream_path, "CSV of similarities or detections.jsonl")->required();
    simulate->add_option("--out", transcript_path, "transcript CSV (default stdout)");
    simulate->add_option("--config", config_path, "flat key=value config file");
    simulate->add_option("--set", overrides, "config override key=value");

    std::uint64_t seed = 1;
    int count = 1, max_insects = 3, clutter = 3;
    std::string size_str = "320x240";
    bool force = false, emit_templates = false;
    auto* generate = app.add_subcommand("generate", "write synthetic scenes with annotations");
    generate->add_option("--seed", seed, "base seed")->required();
    generate->add_option("--count", count, "number of scenes")->required();
    generate->add_option("--size", size_str, "scene size WxH");
    generate->add_option("--out", out_dir, "output directory")->required();
    generate->add_option("--max-insects", max_insects, "insects per scene drawn from 1..N");
    generate->add_option("--clutter", clutter, "distractor blobs per scene");
    generate->add_flag("--force", force, "overwrite existing files");
    generate->add_flag("--emit-templates", emit_templates, "also write template and reference images");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (detect->parsed()) {
            if (!config_path.empty() && !fs::exists(config_path)) {
                std::cerr << "error: config file not found: " << config_path << "\n";
                return kExitUsage;
            }
            return cmd_detect(config_path, templates_dir, reference_path, input_dir, out_dir,
                              annotate_flag, stride_flag, overrides, debug_dir);
        }
        if (eval->parsed()) return cmd_eval(detections_path, truth_dir, config_path, overrides);
        if (simulate->parsed())
            return cmd_simulate(stream_path, transcript_path, config_path, overrides);
        if (generate->parsed())
            return cmd_generate(seed, count, size_str, out_dir, force, emit_templates, max_insects,
                                clutter);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
