#include "segmerge/pipeline.hpp"

#include "segmerge/error.hpp"
#include "segmerge/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <chrono>
#include <fstream>
#include <stdexcept>

namespace segmerge {

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (opening_se_size < 1 || opening_se_size % 2 == 0) fail("opening-size must be a positive odd number");
    if (opening_iterations < 1) fail("opening-iters must be at least 1");
    if (!(distance_fraction > 0.0 && distance_fraction < 1.0)) fail("distance-fraction must lie in (0, 1)");
    if (hue_bins < 1) fail("hue-bins must be at least 1");
    if (sat_bins < 1) fail("sat-bins must be at least 1");
    if (!(merge_threshold >= 0.0) || !std::isfinite(merge_threshold)) fail("merge-threshold must be finite and >= 0");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("invalid value '" + text + "' for " + key);
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw std::invalid_argument("invalid boolean '" + text + "' for " + key);
}

std::string_view mode_name(ElevationMode m) { return m == ElevationMode::gradient ? "gradient" : "intensity"; }

}  // namespace

void apply_config_value(PipelineConfig& cfg, const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "opening-size")
        cfg.opening_se_size = parse_number<int>(key, value);
    else if (key == "opening-iters")
        cfg.opening_iterations = parse_number<int>(key, value);
    else if (key == "distance-fraction")
        cfg.distance_fraction = parse_number<double>(key, value);
    else if (key == "hue-bins")
        cfg.hue_bins = parse_number<int>(key, value);
    else if (key == "sat-bins")
        cfg.sat_bins = parse_number<int>(key, value);
    else if (key == "merge-threshold")
        cfg.merge_threshold = parse_number<double>(key, value);
    else if (key == "elevation") {
        if (value == "gradient")
            cfg.elevation = ElevationMode::gradient;
        else if (value == "intensity")
            cfg.elevation = ElevationMode::intensity;
        else
            throw std::invalid_argument("elevation must be 'gradient' or 'intensity'");
    } else if (key == "seed")
        cfg.render_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "dump-stages")
        cfg.dump_stages = parse_bool(key, value);
    else if (key == "background-markers")
        cfg.background_markers = parse_bool(key, value);
    else
        throw std::invalid_argument("unknown configuration key '" + raw_key + "'");
}

PipelineConfig read_config_file(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("'" + path.string() + "': cannot open config file");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        apply_config_value(base, trim(line.substr(0, eq)), value);
    }
    return base;
}

PipelineResult run_pipeline(const RgbImage& input, const PipelineConfig& cfg, std::string input_name) {
    cfg.validate();
    PipelineResult result;
    RunReport& report = result.report;
    report.input = std::move(input_name);
    report.config = cfg;

    using clock = std::chrono::steady_clock;
    auto mark = clock::now();
    auto lap = [&](const char* stage) {
        const auto now = clock::now();
        report.timings.push_back({stage, std::chrono::duration<double, std::milli>(now - mark).count()});
        mark = now;
    };

    GrayImage gray = to_grayscale(input);
    lap("grayscale");
    report.otsu_threshold = otsu_threshold(gray);
    BinaryMask otsu = binarize(gray, report.otsu_threshold);
    lap("otsu");
    BinaryMask opened = open(otsu, StructuringElement::square(cfg.opening_se_size), cfg.opening_iterations);
    if (count_foreground(opened) == 0)
        throw DegenerateInputError("opening", "no foreground survives the morphological opening");
    lap("opening");
    MarkerSet seeds = generate_markers(opened, cfg.distance_fraction, cfg.background_markers);
    report.foreground_marker_count = seeds.foreground_count;
    report.background_marker_count = seeds.background_count;
    report.marker_count = seeds.markers.count();
    lap("markers");
    const ElevationMap relief = cfg.elevation == ElevationMode::gradient ? gradient_magnitude(gray) : intensity_elevation(gray);
    LabelMap basins = watershed_flood(relief, seeds.markers);
    {
        const auto areas = label_areas(basins);
        report.watershed_segment_count = static_cast<std::uint32_t>(areas.size() - areas.count(kBoundaryLabel));
    }
    lap("watershed");
    const HsPixelPlane hs = to_hue_saturation(input);
    const RegionAdjacencyGraph rag = build_rag(basins, hs, cfg.hue_bins, cfg.sat_bins);
    lap("adjacency");
    result.merge = merge_segments(rag, basins, cfg.merge_threshold);
    lap("merge");

    report.final_segment_count = result.merge.final_count;
    report.merge_log = result.merge.merge_log;
    for (const auto& [id, n] : label_areas(result.merge.final_labels))
        if (id != kBoundaryLabel) report.segment_areas[id] = n;

    if (cfg.dump_stages) {
        StageImages stages;
        stages.gray = std::move(gray);
        stages.otsu = std::move(otsu);
        stages.distance = distance_transform(opened);
        stages.opened = std::move(opened);
        stages.markers = std::move(seeds.markers);
        stages.watershed = std::move(basins);
        result.stages = std::move(stages);
    }
    return result;
}

nlohmann::json to_json(const PipelineConfig& cfg) {
    return {
        {"opening_se_size", cfg.opening_se_size},
        {"opening_iterations", cfg.opening_iterations},
        {"distance_fraction", cfg.distance_fraction},
        {"hue_bins", cfg.hue_bins},
        {"sat_bins", cfg.sat_bins},
        {"merge_threshold", cfg.merge_threshold},
        {"elevation_mode", mode_name(cfg.elevation)},
        {"render_seed", cfg.render_seed},
        {"dump_stages", cfg.dump_stages},
        {"background_markers", cfg.background_markers},
    };
}

nlohmann::json to_json(const RunReport& report, bool include_timings) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["input"] = report.input;
    j["config"] = to_json(report.config);
    if (include_timings) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& s : report.timings) t[s.stage] = s.milliseconds;
        j["timings_ms"] = t;
    }
    j["otsu_threshold_used"] = report.otsu_threshold;
    j["foreground_marker_count"] = report.foreground_marker_count;
    j["background_marker_count"] = report.background_marker_count;
    j["marker_count"] = report.marker_count;
    j["watershed_segment_count"] = report.watershed_segment_count;
    j["final_segment_count"] = report.final_segment_count;
    nlohmann::json log = nlohmann::json::array();
    for (const auto& m : report.merge_log) {
        nlohmann::json e{{"survivor", m.survivor}, {"absorbed", m.absorbed}, {"distance", m.distance}};
        if (m.uniform_fallback) e["uniform_fallback"] = true;
        log.push_back(std::move(e));
    }
    j["merge_log"] = std::move(log);
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& [id, area] : report.segment_areas) segments.push_back({{"id", id}, {"area", area}});
    j["segments"] = std::move(segments);
    return j;
}

nlohmann::json label_sidecar(const LabelMap& labels) {
    nlohmann::json basins = nlohmann::json::array();
    std::size_t boundary = 0;
    for (const auto& [id, n] : label_areas(labels)) {
        if (id == kBoundaryLabel)
            boundary = n;
        else
            basins.push_back({{"id", id}, {"pixels", n}});
    }
    return {{"schema_version", kReportSchemaVersion},
            {"width", labels.width()},
            {"height", labels.height()},
            {"boundary_label", kBoundaryLabel},
            {"boundary_pixels", boundary},
            {"basins", std::move(basins)}};
}

GrayImage render_mask(const BinaryMask& mask) {
    GrayImage out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 255 : 0;
    return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("'" + path.string() + "': cannot open for writing");
    out << text;
    if (!out.flush()) throw IoError("'" + path.string() + "': write failed");
}

}  // namespace

void write_outputs(const PipelineResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("'" + dir.string() + "': cannot create output directory: " + ec.message());

    const auto seed = result.report.config.render_seed;
    save_image(render_labels(result.merge.final_labels, seed), dir / "merged.png");
    save_label_map(result.merge.final_labels, dir / "labels.png");
    write_text(dir / "report.json", to_json(result.report).dump(2) + "\n");

    if (!result.stages) return;
    const StageImages& s = *result.stages;
    save_image(s.gray, dir / "gray.png");
    save_image(render_mask(s.otsu), dir / "otsu.png");
    save_image(render_mask(s.opened), dir / "opened.png");
    if (s.distance) save_image(render_distance(*s.distance), dir / "distance.png");
    save_image(render_labels(s.markers.labels(), seed), dir / "markers.png");
    save_image(render_labels(s.watershed, seed), dir / "watershed.png");
    save_label_map(s.watershed, dir / "watershed_labels.png");
    write_text(dir / "watershed_labels.json", label_sidecar(s.watershed).dump(2) + "\n");
}

}  // namespace segmerge
