#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "herigraph/sparse.hpp"
#include "herigraph/spatial.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

enum class Layer : std::size_t { temporal = 0, social = 1, spatial = 2 };
inline constexpr std::array<Layer, 3> kLayers{Layer::temporal, Layer::social, Layer::spatial};
std::string_view layer_name(Layer layer);  // TEM, SOC, SPA

struct WeekAxis {
    std::vector<std::int64_t> weeks;  // sorted unique week ordinals
    IndicatorMatrix T;
};

WeekAxis one_hot_time(std::span<const PostRecord> records);
IndicatorMatrix one_hot_user(std::span<const PostRecord> records, const UserRelations& relations);

// Direct-contact matrix over users with a unit diagonal.
SparseSymMatrix friendship_matrix(const UserRelations& relations);
// Jaccard overlap of group subscriptions; absent when the overlap is zero.
SparseSymMatrix interest_matrix(const UserRelations& relations);

// Tridiagonal week kernel: 1 on the diagonal, alpha between neighbouring
// ranks. By default only calendar-consecutive weeks count as neighbours;
// `set_rank` links every pair of consecutive ranks instead.
SparseSymMatrix temporal_kernel(std::span<const std::int64_t> weeks, double alpha, bool set_rank);

// (a1 I + a2 friendship + a3 [interest > beta]) / (a1 + a2 + a3).
SparseSymMatrix social_kernel(const SparseSymMatrix& friendship, const SparseSymMatrix& interest,
                              const GraphConfig& cfg);

// Conductance (max - w) / max on kept edges; unit diagonal when enabled.
SparseSymMatrix spatial_kernel(const FilteredNetwork& network, const GraphConfig& cfg);

// A[i, j] = kernel[row(i), row(j)] over posts, diagonal included. Built by
// walking kernel neighbourhoods of each post's row; never dense.
SparseSymMatrix project_adjacency(const IndicatorMatrix& ind, const SparseSymMatrix& kernel,
                                  unsigned threads = 1);

// Binary union of the layer supports without the diagonal.
SparseSymMatrix compose_simple(std::span<const SparseSymMatrix> layers);

// Three weighted edge layers over the same K posts plus their binary union.
// Layers hold edges only: the projected diagonal is stripped.
struct MultiGraph {
    std::size_t posts = 0;
    std::array<SparseSymMatrix, 3> layers;
    SparseSymMatrix composed;

    const SparseSymMatrix& layer(Layer l) const { return layers[static_cast<std::size_t>(l)]; }
    std::size_t total_layer_entries() const;

    // Strips diagonals and composes; all inputs must share one dimension.
    static MultiGraph from_projections(std::array<SparseSymMatrix, 3> projected);
};

struct GraphDiagnostics {
    std::size_t groupless_users = 0;             // social kernel diagonal below 1
    std::size_t groupless_users_with_posts = 0;
    std::size_t social_nodes_unthresholded = 0;  // non-isolated SOC posts if any overlap counted
};

struct GraphBuild {
    WeekAxis time;
    IndicatorMatrix users;
    std::vector<Index> nearest_nodes;  // per post, index into the source network
    SpatialSubgraph spatial;
    SparseSymMatrix friendship;
    SparseSymMatrix interest;
    SparseSymMatrix temporal_kernel;
    SparseSymMatrix social_kernel;
    SparseSymMatrix spatial_kernel;
    MultiGraph graph;
    GraphDiagnostics diagnostics;
};

GraphBuild build_graphs(std::span<const PostRecord> records, const UserRelations& relations,
                        const SpatialNetwork& network, const GraphConfig& cfg, unsigned threads = 1);

}  // namespace herigraph
