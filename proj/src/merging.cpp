#include "segmerge/merging.hpp"

#include "segmerge/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace segmerge {

Histogram2D::Histogram2D(int hue_bins, int sat_bins) : hue_bins_(hue_bins), sat_bins_(sat_bins) {
    if (hue_bins < 1 || sat_bins < 1) throw std::invalid_argument("histogram needs at least one bin per axis");
    weights_.assign(static_cast<std::size_t>(hue_bins) * sat_bins, 0.0);
}

int hue_bin(double hue, int hue_bins) noexcept {
    const int b = static_cast<int>(std::floor(hue / (360.0 / hue_bins)));
    return std::clamp(b, 0, hue_bins - 1);
}

int saturation_bin(double saturation, int sat_bins) noexcept {
    const int b = static_cast<int>(std::floor(saturation * sat_bins));
    return std::clamp(b, 0, sat_bins - 1);
}

void Histogram2D::add(double hue, double saturation) {
    weights_[index(hue_bin(hue, hue_bins_), saturation_bin(saturation, sat_bins_))] += 1.0;
    ++total_pixels_;
}

Histogram2D& Histogram2D::operator+=(const Histogram2D& other) {
    if (!same_geometry(other)) throw std::invalid_argument("histogram bin geometry mismatch");
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
    total_pixels_ += other.total_pixels_;
    return *this;
}

Histogram2D segment_histogram(const HsPixelPlane& hs, const LabelMap& labels, std::uint32_t id, int hue_bins,
                              int sat_bins) {
    if (!labels.same_shape(hs.width(), hs.height())) throw std::invalid_argument("label map and HS plane differ in size");
    if (id == kBoundaryLabel) throw std::invalid_argument("the boundary label is not a segment");
    Histogram2D h(hue_bins, sat_bins);
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == id) h.add(hs.hue[i], hs.saturation[i]);
    if (h.total_pixels() == 0)
        throw std::invalid_argument("segment " + std::to_string(id) + " has no pixels in the label map");
    return h;
}

std::map<std::uint32_t, Histogram2D> segment_histograms(const HsPixelPlane& hs, const LabelMap& labels,
                                                        int hue_bins, int sat_bins) {
    if (!labels.same_shape(hs.width(), hs.height())) throw std::invalid_argument("label map and HS plane differ in size");
    std::map<std::uint32_t, Histogram2D> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::uint32_t id = labels[i];
        if (id == kBoundaryLabel) continue;
        auto it = out.find(id);
        if (it == out.end()) it = out.emplace(id, Histogram2D(hue_bins, sat_bins)).first;
        it->second.add(hs.hue[i], hs.saturation[i]);
    }
    return out;
}

Histogram2D normalize(const Histogram2D& h) {
    double sum = 0.0;
    for (double v : h.weights()) sum += v;
    if (!(sum > 0.0)) throw DegenerateInputError("normalize", "histogram is empty");
    Histogram2D out = h;
    for (double& v : out.weights()) v /= sum;
    return out;
}

double bhattacharyya_distance(const Histogram2D& a, const Histogram2D& b) {
    if (!a.same_geometry(b)) throw std::invalid_argument("histogram bin geometry mismatch");
    double coefficient = 0.0, sum_a = 0.0, sum_b = 0.0;
    const auto wa = a.weights(), wb = b.weights();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        coefficient += std::sqrt(wa[i] * wb[i]);
        sum_a += wa[i];
        sum_b += wb[i];
    }
    const double scale = std::sqrt(sum_a * sum_b);
    if (scale > 0.0) coefficient /= scale;
    coefficient = std::clamp(coefficient, 0.0, 1.0);
    return std::sqrt(1.0 - coefficient);
}

std::set<std::pair<std::uint32_t, std::uint32_t>> adjacent_pairs(const LabelMap& labels) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    auto add = [&](std::uint32_t a, std::uint32_t b) {
        if (a != b) pairs.emplace(std::min(a, b), std::max(a, b));
    };
    const int w = labels.width(), h = labels.height();
    std::vector<std::uint32_t> around;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t id = labels.at(x, y);
            if (id != kBoundaryLabel) {
                // forward half of the 8-neighborhood: E, SW, S, SE
                const Offset forward[4] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
                for (const auto [dx, dy] : forward) {
                    if (!labels.contains(x + dx, y + dy)) continue;
                    const std::uint32_t n = labels.at(x + dx, y + dy);
                    if (n != kBoundaryLabel) add(id, n);
                }
                continue;
            }
            around.clear();
            for (const auto [dx, dy] : kNeighborOffsets) {
                if (!labels.contains(x + dx, y + dy)) continue;
                const std::uint32_t n = labels.at(x + dx, y + dy);
                if (n != kBoundaryLabel) around.push_back(n);
            }
            for (std::size_t i = 0; i < around.size(); ++i)
                for (std::size_t j = i + 1; j < around.size(); ++j) add(around[i], around[j]);
        }
    }
    return pairs;
}

namespace {

Histogram2D normalized_or_uniform(const Histogram2D& raw) {
    double sum = 0.0;
    for (double v : raw.weights()) sum += v;
    if (sum > 0.0) return normalize(raw);
    Histogram2D uniform(raw.hue_bins(), raw.sat_bins());
    const double v = 1.0 / static_cast<double>(uniform.bin_count());
    for (double& w : uniform.weights()) w = v;
    return uniform;
}

}  // namespace

RegionAdjacencyGraph build_rag(const LabelMap& labels, const HsPixelPlane& hs, int hue_bins, int sat_bins) {
    RegionAdjacencyGraph rag;
    rag.hue_bins = hue_bins;
    rag.sat_bins = sat_bins;
    for (auto& [id, hist] : segment_histograms(hs, labels, hue_bins, sat_bins)) {
        RagNode node;
        node.area = hist.total_pixels();
        node.histogram = std::move(hist);
        rag.nodes.emplace(id, std::move(node));
    }
    std::map<std::uint32_t, Histogram2D> normalized;
    for (const auto& [id, node] : rag.nodes) normalized.emplace(id, normalized_or_uniform(node.histogram));
    for (const auto& [a, b] : adjacent_pairs(labels))
        rag.edges.emplace(std::pair{a, b}, bhattacharyya_distance(normalized.at(a), normalized.at(b)));
    return rag;
}

void dissolve_interior_boundaries(LabelMap& labels) {
    const int w = labels.width(), h = labels.height();
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == kBoundaryLabel) pending.push_back(i);

    std::vector<std::pair<std::size_t, std::uint32_t>> absorbed;
    for (;;) {
        absorbed.clear();
        for (const std::size_t p : pending) {
            const int x = static_cast<int>(p % static_cast<std::size_t>(w));
            const int y = static_cast<int>(p / static_cast<std::size_t>(w));
            std::uint32_t only = kBoundaryLabel;
            bool several = false;
            for (const auto [dx, dy] : kNeighborOffsets) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::uint32_t n = labels.at(nx, ny);
                if (n == kBoundaryLabel) continue;
                if (only == kBoundaryLabel)
                    only = n;
                else if (n != only)
                    several = true;
            }
            if (!several && only != kBoundaryLabel) absorbed.emplace_back(p, only);
        }
        if (absorbed.empty()) break;
        for (const auto& [p, id] : absorbed) labels[p] = id;
        std::erase_if(pending, [&](std::size_t p) { return labels[p] != kBoundaryLabel; });
    }
}

MergeResult merge_segments(const RegionAdjacencyGraph& rag, const LabelMap& labels, double threshold) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("merge threshold must be a non-negative number");

    struct Segment {
        Histogram2D raw;
        Histogram2D normalized;
        bool fallback;
        std::set<std::uint32_t> neighbors;
    };
    std::map<std::uint32_t, Segment> segments;
    for (const auto& [id, node] : rag.nodes) {
        Segment s{node.histogram, {}, node.uniform_fallback, {}};
        double sum = 0.0;
        for (double v : s.raw.weights()) sum += v;
        s.fallback = s.fallback || !(sum > 0.0);
        s.normalized = normalized_or_uniform(s.raw);
        segments.emplace(id, std::move(s));
    }

    using Candidate = std::tuple<double, std::uint32_t, std::uint32_t>;
    std::set<Candidate> queue;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> weight;
    for (const auto& [key, d] : rag.edges) {
        const auto [a, b] = key;
        if (!segments.contains(a) || !segments.contains(b))
            throw std::invalid_argument("adjacency graph edge refers to an unknown segment");
        segments.at(a).neighbors.insert(b);
        segments.at(b).neighbors.insert(a);
        weight[key] = d;
        queue.emplace(d, a, b);
    }
    auto drop_edge = [&](std::uint32_t a, std::uint32_t b) {
        const std::pair key{std::min(a, b), std::max(a, b)};
        const auto it = weight.find(key);
        if (it == weight.end()) return;
        queue.erase({it->second, key.first, key.second});
        weight.erase(it);
    };

    MergeResult result;
    result.initial_count = static_cast<std::uint32_t>(segments.size());
    std::map<std::uint32_t, std::uint32_t> absorbed_into;

    while (!queue.empty()) {
        const auto [d, survivor, absorbed] = *queue.begin();
        if (!(d < threshold)) break;

        Segment& keep = segments.at(survivor);
        Segment& gone = segments.at(absorbed);
        result.merge_log.push_back({survivor, absorbed, d, keep.fallback || gone.fallback});
        absorbed_into[absorbed] = survivor;

        std::set<std::uint32_t> neighbors = keep.neighbors;
        neighbors.insert(gone.neighbors.begin(), gone.neighbors.end());
        neighbors.erase(survivor);
        neighbors.erase(absorbed);
        for (const std::uint32_t n : keep.neighbors) drop_edge(survivor, n);
        for (const std::uint32_t n : gone.neighbors) {
            drop_edge(absorbed, n);
            segments.at(n).neighbors.erase(absorbed);
        }

        keep.raw += gone.raw;
        keep.fallback = keep.fallback && gone.fallback;
        keep.normalized = normalized_or_uniform(keep.raw);
        keep.neighbors = neighbors;
        segments.erase(absorbed);

        Segment& merged = segments.at(survivor);
        for (const std::uint32_t n : neighbors) {
            Segment& other = segments.at(n);
            other.neighbors.insert(survivor);
            const double nd = bhattacharyya_distance(merged.normalized, other.normalized);
            const std::pair key{std::min(survivor, n), std::max(survivor, n)};
            weight[key] = nd;
            queue.emplace(nd, key.first, key.second);
        }
    }

    auto resolve = [&](std::uint32_t id) {
        for (auto it = absorbed_into.find(id); it != absorbed_into.end(); it = absorbed_into.find(id)) id = it->second;
        return id;
    };
    result.final_labels = labels;
    if (!absorbed_into.empty()) {
        std::map<std::uint32_t, std::uint32_t> final_id;
        for (const auto& [id, _] : rag.nodes) final_id[id] = resolve(id);
        for (auto& v : result.final_labels.pixels())
            if (v != kBoundaryLabel) v = final_id.at(v);
    }
    dissolve_interior_boundaries(result.final_labels);
    result.final_count = static_cast<std::uint32_t>(segments.size());
    return result;
}

}  // namespace segmerge
