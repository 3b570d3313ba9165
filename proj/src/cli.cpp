#include "segmerge/cli.hpp"

#include "segmerge/error.hpp"
#include "segmerge/image_io.hpp"
#include "segmerge/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace segmerge::cli {
namespace {

namespace fs = std::filesystem;

struct FileOutcome {
    int status = kExitOk;
    std::string diagnostic;
    std::string summary;
};

FileOutcome process(const fs::path& input, const fs::path& outdir, const PipelineConfig& cfg) {
    FileOutcome outcome;
    try {
        const RgbImage img = load_image(input);
        const PipelineResult result = run_pipeline(img, cfg, input.string());
        write_outputs(result, outdir);
        std::ostringstream s;
        s << input.string() << ": " << result.report.watershed_segment_count << " watershed segments -> "
          << result.report.final_segment_count << " after merging (" << outdir.string() << ")";
        outcome.summary = s.str();
    } catch (const DegenerateInputError& e) {
        outcome = {kExitInputError, input.string() + ": degenerate input at " + e.what(), {}};
    } catch (const IoError& e) {
        outcome = {kExitInputError, e.what(), {}};
    } catch (const FormatError& e) {
        outcome = {kExitInputError, e.what(), {}};
    } catch (const std::exception& e) {
        outcome = {kExitInputError, input.string() + ": " + e.what(), {}};
    }
    return outcome;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unsupervised watershed segmentation with hue-saturation merging", "segmerge"};
    PipelineConfig cfg;
    std::string config_path;
    std::string elevation = "gradient";
    std::string outdir = ".";
    bool no_background = false;
    std::vector<std::string> inputs;

    app.add_option("--config", config_path, "key = value file applied before the flags")->check(CLI::ExistingFile);
    auto* o_size = app.add_option("--opening-size", cfg.opening_se_size, "opening structuring element side (odd)");
    auto* o_iters = app.add_option("--opening-iters", cfg.opening_iterations, "erosions/dilations per opening");
    auto* o_frac = app.add_option("--distance-fraction", cfg.distance_fraction, "marker cut as a fraction of max distance");
    auto* o_hue = app.add_option("--hue-bins", cfg.hue_bins, "hue histogram bins");
    auto* o_sat = app.add_option("--sat-bins", cfg.sat_bins, "saturation histogram bins");
    auto* o_thr = app.add_option("--merge-threshold", cfg.merge_threshold, "merge neighbors closer than this");
    auto* o_elev = app.add_option("--elevation", elevation, "relief to flood")->check(CLI::IsMember({"gradient", "intensity"}));
    auto* o_seed = app.add_option("--seed", cfg.render_seed, "color assignment seed for renderings");
    auto* o_dump = app.add_flag("--dump-stages", cfg.dump_stages, "also write every intermediate stage");
    auto* o_nobg = app.add_flag("--no-background-markers", no_background, "seed the flood from foreground markers only");
    app.add_option("-o,--output", outdir, "output directory");
    app.add_option("inputs", inputs, "PNG or PPM images")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "segmerge: " << e.what() << " (see --help)\n";
        return kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            // File values first, then re-apply any flag given on the command line.
            PipelineConfig from_file = read_config_file(config_path);
            auto given = [](const CLI::Option* o) { return o->count() > 0; };
            if (given(o_size)) from_file.opening_se_size = cfg.opening_se_size;
            if (given(o_iters)) from_file.opening_iterations = cfg.opening_iterations;
            if (given(o_frac)) from_file.distance_fraction = cfg.distance_fraction;
            if (given(o_hue)) from_file.hue_bins = cfg.hue_bins;
            if (given(o_sat)) from_file.sat_bins = cfg.sat_bins;
            if (given(o_thr)) from_file.merge_threshold = cfg.merge_threshold;
            if (given(o_seed)) from_file.render_seed = cfg.render_seed;
            if (given(o_dump)) from_file.dump_stages = true;
            if (given(o_nobg)) from_file.background_markers = false;
            if (given(o_elev)) apply_config_value(from_file, "elevation", elevation);
            cfg = from_file;
        } else {
            apply_config_value(cfg, "elevation", elevation);
            if (no_background) cfg.background_markers = false;
        }
        cfg.validate();
    } catch (const IoError& e) {
        err << "segmerge: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "segmerge: " << e.what() << "\n";
        return kExitUsage;
    }

    // One input writes straight into the output directory; several get a
    // subdirectory each, named after the input stem.
    std::vector<fs::path> targets;
    std::set<std::string> stems;
    for (const auto& in : inputs) {
        fs::path dir = outdir;
        if (inputs.size() > 1) {
            std::string stem = fs::path(in).stem().string();
            for (int n = 2; !stems.insert(stem).second; ++n) stem = fs::path(in).stem().string() + "-" + std::to_string(n);
            dir /= stem;
        }
        targets.push_back(dir);
    }

    std::vector<std::future<FileOutcome>> jobs;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        jobs.push_back(std::async(inputs.size() > 1 ? std::launch::async : std::launch::deferred, process,
                                  fs::path(inputs[i]), targets[i], cfg));

    int status = kExitOk;
    for (auto& job : jobs) {
        const FileOutcome r = job.get();
        if (r.status != kExitOk) {
            err << "segmerge: " << r.diagnostic << "\n";
            status = r.status;
        } else {
            out << r.summary << "\n";
        }
    }
    return status;
}

}  // namespace segmerge::cli
