#pragma once

#include "segmerge/image.hpp"
#include "segmerge/merging.hpp"
#include "segmerge/seeding.hpp"
#include "segmerge/thresholding.hpp"
#include "segmerge/watershed.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace segmerge {

enum class ElevationMode { gradient, intensity };

struct PipelineConfig {
    int opening_se_size = 3;
    int opening_iterations = 2;
    double distance_fraction = 0.5;
    int hue_bins = 30;
    int sat_bins = 32;
    double merge_threshold = 0.8;
    ElevationMode elevation = ElevationMode::gradient;
    std::uint64_t render_seed = 0;
    bool dump_stages = false;
    /// Also seed the flood from the thresholded distance map of the background.
    bool background_markers = true;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
};

/// Flat `key = value` file; `#` starts a comment. Keys are the long CLI option
/// names without dashes or with underscores (`merge-threshold`, `merge_threshold`).
/// Throws std::invalid_argument on unknown keys or malformed values.
PipelineConfig read_config_file(const std::filesystem::path& path, PipelineConfig base = {});
void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

struct RunReport {
    std::string input;
    PipelineConfig config;
    std::vector<StageTiming> timings;
    std::uint8_t otsu_threshold = 0;
    std::uint32_t foreground_marker_count = 0;
    std::uint32_t background_marker_count = 0;
    std::uint32_t marker_count = 0;
    std::uint32_t watershed_segment_count = 0;
    std::uint32_t final_segment_count = 0;
    std::vector<MergeStep> merge_log;
    /// Final segment id -> pixel count (boundary pixels excluded).
    std::map<std::uint32_t, std::size_t> segment_areas;
};

/// Intermediate products, kept when stage dumps are requested.
struct StageImages {
    GrayImage gray;
    BinaryMask otsu;
    BinaryMask opened;
    std::optional<DistanceMap> distance;
    MarkerMap markers;
    LabelMap watershed;
};

struct PipelineResult {
    MergeResult merge;
    RunReport report;
    std::optional<StageImages> stages;
};

/// grayscale -> Otsu -> opening -> distance markers -> watershed -> HS merge.
/// Degenerate inputs surface as DegenerateInputError carrying the stage name.
PipelineResult run_pipeline(const RgbImage& input, const PipelineConfig& cfg, std::string input_name = {});

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const PipelineConfig& cfg);
nlohmann::json to_json(const RunReport& report, bool include_timings = true);
/// Basin ids and pixel counts accompanying a 16-bit label PNG.
nlohmann::json label_sidecar(const LabelMap& labels);

/// merged.png, labels.png and report.json; plus the stage sequence when
/// `result.stages` is populated. Creates `dir` if needed.
void write_outputs(const PipelineResult& result, const std::filesystem::path& dir);

GrayImage render_mask(const BinaryMask& mask);

}  // namespace segmerge
