#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "herigraph/sparse.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

inline constexpr double kEarthRadiusM = 6371008.8;

// Great-circle distance in metres.
double haversine_m(GeoPoint a, GeoPoint b);

// Exact nearest-node queries under haversine distance. Equidistant nodes
// resolve to the lexicographically smallest node_id.
//
// Nodes live in a k-d tree over unit-sphere coordinates; chord length is
// monotone in great-circle distance, so the tree yields a small candidate
// ball that is then ranked by haversine itself.
class NearestNodeIndex {
public:
    explicit NearestNodeIndex(const SpatialNetwork& network);

    // Index into network.nodes.
    Index nearest(GeoPoint p) const;

private:
    struct Node {
        std::array<double, 3> xyz;
        Index id;
    };
    struct Best {
        double d2;
        Index id;
    };

    void build(std::size_t lo, std::size_t hi, int depth);
    void search(std::size_t lo, std::size_t hi, int depth, const std::array<double, 3>& q,
                Best& best) const;
    void collect(std::size_t lo, std::size_t hi, int depth, const std::array<double, 3>& q,
                 double r2, std::vector<Index>& out) const;

    const SpatialNetwork& network_;
    std::vector<Node> tree_;  // implicit: median of each range is its root
};

Index assign_nearest_node(GeoPoint p, const SpatialNetwork& network);

// G = (V, E, w): nodes with at least one post, edges among them within the
// travel-time cutoff. Edge endpoints are ranks into `kept`.
struct FilteredNetwork {
    std::vector<Index> kept;          // indices into the source network, ascending
    std::vector<NetworkEdge> edges;   // (rank a < rank b, travel_min)
};

struct SpatialSubgraph {
    FilteredNetwork network;
    IndicatorMatrix S;                // posts -> kept-node ranks
    std::size_t edges_over_cutoff = 0;
};

SpatialSubgraph spatial_subgraph(const SpatialNetwork& network, std::span<const Index> assignments,
                                 double max_travel_min);

}  // namespace herigraph
