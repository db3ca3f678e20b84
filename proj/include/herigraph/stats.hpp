#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herigraph/graph.hpp"
#include "herigraph/labels.hpp"
#include "herigraph/sparse.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

// Components over non-isolated nodes, each sorted ascending and ordered by
// smallest member. Isolated nodes are left out.
std::vector<std::vector<Index>> connected_components(const Adjacency& adj);
std::size_t isolated_count(const Adjacency& adj);

// 2m / (n (n - 1)); throws DataError for n < 2.
double graph_density(std::size_t nodes, std::size_t edges);

// Largest BFS eccentricity inside a connected node set. Exact; uses the
// iterative fringe-upper-bound scheme so that most graphs need only a few
// BFS passes. Throws DataError if `component` is not connected.
std::size_t hop_diameter(std::span<const Index> component, const Adjacency& adj);

// Degrees of non-isolated nodes, descending.
std::vector<std::size_t> degree_rank_size(const Adjacency& adj);

inline constexpr double kHistogramSmoothing = 1e-9;

// D_KL(p || q) over histograms, each smoothed by kHistogramSmoothing per
// cell and normalised.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Pearson chi-square of observed counts against a reference distribution
// scaled to the observed total.
double chi_square(std::span<const double> observed, std::span<const double> expected_dist);

struct LayerStats {
    std::size_t node_count = 0;  // non-isolated
    std::size_t edge_count = 0;
    std::size_t isolated_count = 0;
    std::size_t component_count = 0;
    std::size_t largest_cc_size = 0;
    std::size_t largest_cc_diameter = 0;
    double density = 0.0;
    double weight_min = 0.0;
    double weight_max = 0.0;
    std::size_t distinct_weights = 0;
    std::vector<std::size_t> degree_rank_size;
};

LayerStats layer_stats(const SparseSymMatrix& layer);

struct NetworkStats {
    std::size_t input_nodes = 0;
    std::size_t input_edges = 0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t dropped_nodes = 0;         // V0 \ V
    std::size_t edges_over_cutoff = 0;
    std::size_t component_count = 0;       // isolated nodes count as components
    std::size_t largest_cc_size = 0;
    double density = 0.0;
    std::vector<std::size_t> posts_per_node_rank_size;
};

struct FeatureSummary {
    std::size_t posts_with_faces = 0;
    std::array<double, 3> face_mean{};    // over posts with faces
    std::array<double, 3> face_stddev{};
    std::size_t posts_with_text = 0;
    std::array<std::size_t, 3> lang_counts{};
};

struct LabelSummary {
    std::size_t hv_labeled = 0;
    std::size_t ha_labeled = 0;
    std::vector<double> hv_histogram;  // labeled posts by top class
    std::vector<double> ha_histogram;
    std::size_t hv_sparse_topn = 0;
    std::size_t ha_sparse_topn = 0;
};

struct DistributionComparison {
    double kl = 0.0;
    std::optional<double> chi2;  // absent when a reference class is empty
    std::string chi2_note;
};

struct ConsistencyEntry {
    std::string name;
    std::size_t n = 0;
    std::size_t compared = 0;
    Consistency value;
};

struct StatsReport {
    std::size_t posts = 0;
    std::array<LayerStats, 3> layers;
    LayerStats composed;
    NetworkStats network;
    FeatureSummary features;
    LabelSummary labels;
    GraphDiagnostics diagnostics;
    std::size_t social_nodes_thresholded = 0;
    std::optional<std::array<DistributionComparison, 2>> comparison;  // hv, ha
    std::vector<ConsistencyEntry> consistency;
};

StatsReport build_report(std::span<const PostRecord> records, const GraphBuild& graphs,
                         const LabelBundle& labels, const SpatialNetwork& network);

// Compares this report's label histograms with a reference report's
// (D_KL(this || reference), chi-square of this against reference). A
// reference with an empty class leaves chi-square undefined; the reason is
// kept in chi2_note instead of failing the run.
void attach_comparison(StatsReport& report, std::span<const double> reference_hv,
                       std::span<const double> reference_ha);

// Top-n overlap of predictions between two extractions of the same posts,
// matched by post_id (scene top-1/5, attributes top-1/10, values top-1/3).
std::vector<ConsistencyEntry> consistency_report(std::span<const PostRecord> a,
                                                 std::span<const PostRecord> b);

}  // namespace herigraph
