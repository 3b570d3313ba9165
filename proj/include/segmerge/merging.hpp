#pragma once

#include "segmerge/image.hpp"
#include "segmerge/watershed.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace segmerge {

/// Hue x saturation bin grid; weights are raw counts until normalized.
class Histogram2D {
public:
    Histogram2D() = default;
    Histogram2D(int hue_bins, int sat_bins);

    int hue_bins() const noexcept { return hue_bins_; }
    int sat_bins() const noexcept { return sat_bins_; }
    std::size_t bin_count() const noexcept { return weights_.size(); }

    double& at(int hue_bin, int sat_bin) { return weights_[index(hue_bin, sat_bin)]; }
    double at(int hue_bin, int sat_bin) const { return weights_[index(hue_bin, sat_bin)]; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }

    /// Pixels tallied into this histogram (kept through normalization).
    std::uint64_t total_pixels() const noexcept { return total_pixels_; }
    void set_total_pixels(std::uint64_t n) noexcept { total_pixels_ = n; }

    void add(double hue, double saturation);
    /// Bin-wise sum; throws std::invalid_argument on geometry mismatch.
    Histogram2D& operator+=(const Histogram2D& other);
    bool same_geometry(const Histogram2D& other) const noexcept {
        return hue_bins_ == other.hue_bins_ && sat_bins_ == other.sat_bins_;
    }

    friend bool operator==(const Histogram2D&, const Histogram2D&) = default;

private:
    std::size_t index(int h, int s) const noexcept { return static_cast<std::size_t>(h) * sat_bins_ + s; }

    int hue_bins_ = 0;
    int sat_bins_ = 0;
    std::vector<double> weights_;
    std::uint64_t total_pixels_ = 0;
};

int hue_bin(double hue, int hue_bins) noexcept;
int saturation_bin(double saturation, int sat_bins) noexcept;

/// Raw counts over the non-boundary pixels labelled `id`.
/// Throws std::invalid_argument when `id` is the boundary label or has no pixels.
Histogram2D segment_histogram(const HsPixelPlane& hs, const LabelMap& labels, std::uint32_t id, int hue_bins,
                              int sat_bins);

/// Raw histograms for every basin id in one pass.
std::map<std::uint32_t, Histogram2D> segment_histograms(const HsPixelPlane& hs, const LabelMap& labels,
                                                        int hue_bins, int sat_bins);

/// Weights scaled to sum to 1. Throws DegenerateInputError("normalize", ...) when empty.
Histogram2D normalize(const Histogram2D& h);

/// sqrt(1 - BC) with BC = sum_i sqrt(a_i b_i) / sqrt(sum a * sum b), clamped to [0, 1].
/// The denominator is 1 for normalized inputs and makes d(h, h) exactly 0.
double bhattacharyya_distance(const Histogram2D& a, const Histogram2D& b);

struct RagNode {
    std::uint64_t area = 0;  // non-boundary pixels
    Histogram2D histogram;   // raw counts
    bool uniform_fallback = false;
};

struct RegionAdjacencyGraph {
    int hue_bins = 0;
    int sat_bins = 0;
    std::map<std::uint32_t, RagNode> nodes;
    /// Keyed by (smaller id, larger id).
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> edges;

    bool has_edge(std::uint32_t a, std::uint32_t b) const {
        return edges.contains(a < b ? std::pair{a, b} : std::pair{b, a});
    }
};

/// Basin pairs that are 8-adjacent, directly or through a shared boundary pixel.
std::set<std::pair<std::uint32_t, std::uint32_t>> adjacent_pairs(const LabelMap& labels);

RegionAdjacencyGraph build_rag(const LabelMap& labels, const HsPixelPlane& hs, int hue_bins, int sat_bins);

struct MergeStep {
    std::uint32_t survivor;
    std::uint32_t absorbed;
    double distance;
    bool uniform_fallback = false;  // either side had no pixels to histogram
};

struct MergeResult {
    LabelMap final_labels;
    std::vector<MergeStep> merge_log;
    std::uint32_t initial_count = 0;
    std::uint32_t final_count = 0;
};

/// Greedy fixpoint: repeatedly merge the closest adjacent pair (ties by ids)
/// while its distance is below `threshold`; the lower id survives and edges to
/// the merged segment are re-weighted from the summed histogram. Afterwards
/// boundary pixels that touch exactly one basin are absorbed until stable.
MergeResult merge_segments(const RegionAdjacencyGraph& rag, const LabelMap& labels, double threshold);

/// Boundary pixels whose 8-neighborhood holds exactly one basin label join it,
/// repeated until no pixel changes.
void dissolve_interior_boundaries(LabelMap& labels);

}  // namespace segmerge
