#include "herigraph/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "herigraph/error.hpp"

namespace herigraph {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::array<double, 3> to_unit(GeoPoint p) {
    const double lat = p.lat * kDegToRad;
    const double lon = p.lon * kDegToRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

// Slack added to the nearest chord before re-ranking by haversine; about
// 6 mm on the Earth's surface, far above rounding noise.
constexpr double kChordSlack = 1e-9;

}  // namespace

double haversine_m(GeoPoint a, GeoPoint b) {
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    const double dlambda = (b.lon - a.lon) * kDegToRad;
    const double s = std::sin(dphi / 2.0);
    const double t = std::sin(dlambda / 2.0);
    const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

NearestNodeIndex::NearestNodeIndex(const SpatialNetwork& network) : network_(network) {
    tree_.reserve(network.nodes.size());
    for (Index i = 0; i < network.nodes.size(); ++i) {
        tree_.push_back({to_unit(network.nodes[i].geo), i});
    }
    build(0, tree_.size(), 0);
}

void NearestNodeIndex::build(std::size_t lo, std::size_t hi, int depth) {
    if (hi - lo <= 1) return;
    const int axis = depth % 3;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(tree_.begin() + static_cast<std::ptrdiff_t>(lo),
                     tree_.begin() + static_cast<std::ptrdiff_t>(mid),
                     tree_.begin() + static_cast<std::ptrdiff_t>(hi),
                     [axis](const Node& a, const Node& b) {
                         return a.xyz[axis] != b.xyz[axis] ? a.xyz[axis] < b.xyz[axis] : a.id < b.id;
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
}

void NearestNodeIndex::search(std::size_t lo, std::size_t hi, int depth,
                              const std::array<double, 3>& q, Best& best) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Node& n = tree_[mid];
    const double d2 = dist2(n.xyz, q);
    if (d2 < best.d2) best = {d2, n.id};
    const int axis = depth % 3;
    const double delta = q[axis] - n.xyz[axis];
    const bool left_first = delta < 0.0;
    if (left_first) {
        search(lo, mid, depth + 1, q, best);
        if (delta * delta <= best.d2) search(mid + 1, hi, depth + 1, q, best);
    } else {
        search(mid + 1, hi, depth + 1, q, best);
        if (delta * delta <= best.d2) search(lo, mid, depth + 1, q, best);
    }
}

void NearestNodeIndex::collect(std::size_t lo, std::size_t hi, int depth,
                               const std::array<double, 3>& q, double r2,
                               std::vector<Index>& out) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Node& n = tree_[mid];
    if (dist2(n.xyz, q) <= r2) out.push_back(n.id);
    const int axis = depth % 3;
    const double delta = q[axis] - n.xyz[axis];
    if (delta <= 0.0 || delta * delta <= r2) collect(lo, mid, depth + 1, q, r2, out);
    if (delta >= 0.0 || delta * delta <= r2) collect(mid + 1, hi, depth + 1, q, r2, out);
}

Index NearestNodeIndex::nearest(GeoPoint p) const {
    if (tree_.empty()) throw DataError("graph", "nearest-node query on an empty network");
    const auto q = to_unit(p);
    Best best{std::numeric_limits<double>::infinity(), 0};
    search(0, tree_.size(), 0, q, best);

    const double radius = std::sqrt(best.d2) + kChordSlack;
    std::vector<Index> candidates;
    collect(0, tree_.size(), 0, q, radius * radius, candidates);

    Index winner = candidates.front();
    double winner_d = haversine_m(p, network_.nodes[winner].geo);
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        const Index c = candidates[k];
        const double d = haversine_m(p, network_.nodes[c].geo);
        if (d < winner_d || (d == winner_d && network_.nodes[c].node_id < network_.nodes[winner].node_id)) {
            winner = c;
            winner_d = d;
        }
    }
    return winner;
}

Index assign_nearest_node(GeoPoint p, const SpatialNetwork& network) {
    return NearestNodeIndex(network).nearest(p);
}

SpatialSubgraph spatial_subgraph(const SpatialNetwork& network, std::span<const Index> assignments,
                                 double max_travel_min) {
    const std::size_t n0 = network.nodes.size();
    std::vector<std::uint8_t> used(n0, 0);
    for (Index a : assignments) {
        if (a >= n0) throw DataError("graph", "post assigned to an unknown spatial node");
        used[a] = 1;
    }
    constexpr Index kNone = std::numeric_limits<Index>::max();
    std::vector<Index> rank(n0, kNone);
    SpatialSubgraph out;
    for (Index v = 0; v < n0; ++v) {
        if (used[v]) {
            rank[v] = static_cast<Index>(out.network.kept.size());
            out.network.kept.push_back(v);
        }
    }
    for (const auto& e : network.edges) {
        if (rank[e.a] == kNone || rank[e.b] == kNone) continue;
        if (e.travel_min > max_travel_min) {
            ++out.edges_over_cutoff;
            continue;
        }
        out.network.edges.push_back({rank[e.a], rank[e.b], e.travel_min});
    }
    out.S.rows = out.network.kept.size();
    out.S.assignment.reserve(assignments.size());
    for (Index a : assignments) out.S.assignment.push_back(rank[a]);
    return out;
}

}  // namespace herigraph
