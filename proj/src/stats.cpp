#include "herigraph/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

#include "herigraph/error.hpp"
#include "herigraph/parallel.hpp"

namespace herigraph {

namespace {

constexpr std::int32_t kUnseen = -1;

// Plain BFS from `src`; fills dist (must be kUnseen everywhere on entry) and
// returns the visit order. Caller resets dist through the order.
std::vector<Index> bfs(Index src, const Adjacency& adj, std::vector<std::int32_t>& dist,
                       std::vector<Index>* parent = nullptr) {
    std::vector<Index> order{src};
    dist[src] = 0;
    if (parent) (*parent)[src] = src;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const Index v = order[head];
        for (Index w : adj.neighbors(v)) {
            if (dist[w] == kUnseen) {
                dist[w] = dist[v] + 1;
                if (parent) (*parent)[w] = v;
                order.push_back(w);
            }
        }
    }
    return order;
}

void reset(std::vector<std::int32_t>& dist, const std::vector<Index>& order) {
    for (Index v : order) dist[v] = kUnseen;
}

// Eccentricities of up to 64 sources at once: one bit per source, one
// frontier sweep per BFS level. `members` is the connected node set.
std::vector<std::size_t> batch_eccentricity(std::span<const Index> sources,
                                            std::span<const Index> members, const Adjacency& adj) {
    const std::size_t n = adj.node_count();
    std::vector<std::uint64_t> visited(n, 0), frontier(n, 0), next(n, 0);
    for (std::size_t k = 0; k < sources.size(); ++k) {
        visited[sources[k]] |= std::uint64_t{1} << k;
        frontier[sources[k]] |= std::uint64_t{1} << k;
    }
    std::vector<std::size_t> ecc(sources.size(), 0);
    for (std::size_t level = 1;; ++level) {
        std::uint64_t advanced = 0;
        for (Index v : members) {
            std::uint64_t acc = 0;
            for (Index w : adj.neighbors(v)) acc |= frontier[w];
            next[v] = acc & ~visited[v];
            advanced |= next[v];
        }
        if (!advanced) break;
        for (Index v : members) {
            visited[v] |= next[v];
            frontier[v] = next[v];
        }
        for (std::uint64_t bits = advanced; bits; bits &= bits - 1) {
            ecc[static_cast<std::size_t>(std::countr_zero(bits))] = level;
        }
    }
    return ecc;
}

std::vector<double> top_class_histogram(std::span<const double> y, std::size_t classes,
                                        const std::vector<std::uint8_t>& labeled) {
    std::vector<double> hist(classes, 0.0);
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (!labeled[i]) continue;
        const auto col = y.subspan(i * classes, classes);
        ++hist[topn(col, 1).indices.front()];
    }
    return hist;
}

void check_histograms(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) {
        throw DataError("stats", "histograms differ in category count");
    }
    for (double x : p) {
        if (!(x >= 0.0)) throw DataError("stats", "histogram has a negative count");
    }
    for (double x : q) {
        if (!(x >= 0.0)) throw DataError("stats", "histogram has a negative count");
    }
}

}  // namespace

std::vector<std::vector<Index>> connected_components(const Adjacency& adj) {
    const std::size_t n = adj.node_count();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::vector<Index>> out;
    for (Index s = 0; s < n; ++s) {
        if (seen[s] || adj.degree(s) == 0) continue;
        std::vector<Index> comp{s};
        seen[s] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (Index w : adj.neighbors(comp[head])) {
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::size_t isolated_count(const Adjacency& adj) {
    std::size_t n = 0;
    for (Index v = 0; v < adj.node_count(); ++v) n += adj.degree(v) == 0;
    return n;
}

double graph_density(std::size_t nodes, std::size_t edges) {
    if (nodes < 2) throw DataError("stats", "density needs at least two nodes");
    const double n = static_cast<double>(nodes);
    return 2.0 * static_cast<double>(edges) / (n * (n - 1.0));
}

std::size_t hop_diameter(std::span<const Index> component, const Adjacency& adj) {
    if (component.empty()) throw DataError("stats", "diameter of an empty node set");
    const std::size_t n = adj.node_count();
    std::vector<std::int32_t> dist(n, kUnseen);

    // Connectivity: one BFS must reach exactly the given set.
    {
        const auto order = bfs(component.front(), adj, dist);
        bool exact = order.size() == component.size();
        for (Index v : component) exact = exact && v < n && dist[v] != kUnseen;
        reset(dist, order);
        if (!exact) throw DataError("stats", "diameter input is not a connected component");
    }
    if (component.size() == 1) return 0;

    // Double sweep from the highest-degree node picks a central start.
    Index hub = component.front();
    for (Index v : component) {
        if (adj.degree(v) > adj.degree(hub)) hub = v;
    }
    auto order = bfs(hub, adj, dist);
    const Index a = order.back();
    reset(dist, order);

    std::vector<Index> parent(n);
    order = bfs(a, adj, dist, &parent);
    const Index b = order.back();
    std::size_t lower = static_cast<std::size_t>(dist[b]);
    Index centre = b;
    for (std::size_t step = 0; step < lower / 2; ++step) centre = parent[centre];
    reset(dist, order);

    order = bfs(centre, adj, dist);
    const std::size_t ecc_centre = static_cast<std::size_t>(dist[order.back()]);
    std::vector<std::vector<Index>> fringe(ecc_centre + 1);
    for (Index v : order) fringe[static_cast<std::size_t>(dist[v])].push_back(v);
    reset(dist, order);

    lower = std::max(lower, ecc_centre);
    std::size_t upper = 2 * ecc_centre;
    for (std::size_t level = ecc_centre; upper > lower && level > 0; --level) {
        std::size_t level_max = 0;
        const auto& nodes = fringe[level];
        for (std::size_t k = 0; k < nodes.size() && level_max < upper; k += 64) {
            const std::size_t take = std::min<std::size_t>(64, nodes.size() - k);
            const auto ecc = batch_eccentricity(std::span(nodes).subspan(k, take), component, adj);
            level_max = std::max(level_max, *std::max_element(ecc.begin(), ecc.end()));
        }
        if (std::max(lower, level_max) > 2 * (level - 1)) return std::max(lower, level_max);
        lower = std::max(lower, level_max);
        upper = 2 * (level - 1);
    }
    return lower;
}

std::vector<std::size_t> degree_rank_size(const Adjacency& adj) {
    std::vector<std::size_t> deg;
    for (Index v = 0; v < adj.node_count(); ++v) {
        if (adj.degree(v) > 0) deg.push_back(adj.degree(v));
    }
    std::sort(deg.begin(), deg.end(), std::greater<>());
    return deg;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    check_histograms(p, q);
    double sp = 0.0, sq = 0.0, total = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        sp += p[c] + kHistogramSmoothing;
        sq += q[c] + kHistogramSmoothing;
        total += p[c];
    }
    double q_total = 0.0;
    for (double x : q) q_total += x;
    if (total <= 0.0 || q_total <= 0.0) throw DataError("stats", "histogram has zero total count");
    double d = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double pc = (p[c] + kHistogramSmoothing) / sp;
        const double qc = (q[c] + kHistogramSmoothing) / sq;
        d += pc * std::log(pc / qc);
    }
    return std::max(0.0, d);
}

double chi_square(std::span<const double> observed, std::span<const double> expected_dist) {
    check_histograms(observed, expected_dist);
    double total = 0.0, mass = 0.0;
    for (double x : observed) total += x;
    for (double x : expected_dist) mass += x;
    if (mass <= 0.0) throw DataError("stats", "expected distribution has zero mass");
    double chi2 = 0.0;
    for (std::size_t c = 0; c < observed.size(); ++c) {
        const double expected = expected_dist[c] / mass * total;
        if (!(expected > 0.0)) {
            throw DataError("stats", "expected count is zero in category " + std::to_string(c));
        }
        const double diff = observed[c] - expected;
        chi2 += diff * diff / expected;
    }
    return chi2;
}

LayerStats layer_stats(const SparseSymMatrix& layer) {
    LayerStats s;
    const Adjacency adj(layer);
    s.edge_count = adj.edge_count();
    s.isolated_count = isolated_count(adj);
    s.node_count = adj.node_count() - s.isolated_count;
    const auto comps = connected_components(adj);
    s.component_count = comps.size();
    const std::vector<Index>* largest = nullptr;
    for (const auto& c : comps) {
        if (!largest || c.size() > largest->size()) largest = &c;
    }
    if (largest) {
        s.largest_cc_size = largest->size();
        s.largest_cc_diameter = hop_diameter(*largest, adj);
    }
    s.density = s.node_count >= 2 ? graph_density(s.node_count, s.edge_count) : 0.0;

    std::vector<double> w;
    w.reserve(layer.nnz());
    for (const auto& e : layer.entries()) {
        if (e.row != e.col) w.push_back(e.weight);
    }
    std::sort(w.begin(), w.end());
    if (!w.empty()) {
        s.weight_min = w.front();
        s.weight_max = w.back();
        s.distinct_weights = static_cast<std::size_t>(std::unique(w.begin(), w.end()) - w.begin());
    }
    s.degree_rank_size = degree_rank_size(adj);
    return s;
}

StatsReport build_report(std::span<const PostRecord> records, const GraphBuild& graphs,
                         const LabelBundle& labels, const SpatialNetwork& network) {
    if (records.size() != graphs.graph.posts || labels.posts != records.size()) {
        throw DataError("stats", "inputs disagree on the number of posts");
    }
    StatsReport r;
    r.posts = records.size();
    for (Layer l : kLayers) r.layers[static_cast<std::size_t>(l)] = layer_stats(graphs.graph.layer(l));
    r.composed = layer_stats(graphs.graph.composed);
    r.social_nodes_thresholded = r.layers[static_cast<std::size_t>(Layer::social)].node_count;
    r.diagnostics = graphs.diagnostics;

    // Back-end spatial network.
    {
        auto& ns = r.network;
        const auto& g = graphs.spatial.network;
        ns.input_nodes = network.nodes.size();
        ns.input_edges = network.edges.size();
        ns.node_count = g.kept.size();
        ns.edge_count = g.edges.size();
        ns.dropped_nodes = ns.input_nodes - ns.node_count;
        ns.edges_over_cutoff = graphs.spatial.edges_over_cutoff;
        std::vector<CooEntry> e;
        e.reserve(g.edges.size());
        for (const auto& x : g.edges) e.push_back({x.a, x.b, 1.0});
        const Adjacency adj(SparseSymMatrix::from_triples(g.kept.size(), std::move(e)));
        const auto comps = connected_components(adj);
        ns.component_count = comps.size() + isolated_count(adj);
        ns.largest_cc_size = ns.node_count > 0 ? 1 : 0;
        for (const auto& c : comps) ns.largest_cc_size = std::max(ns.largest_cc_size, c.size());
        ns.density = ns.node_count >= 2 ? graph_density(ns.node_count, ns.edge_count) : 0.0;
        ns.posts_per_node_rank_size = graphs.spatial.S.row_counts();
        std::sort(ns.posts_per_node_rank_size.begin(), ns.posts_per_node_rank_size.end(),
                  std::greater<>());
    }

    // Face and language descriptives.
    {
        auto& f = r.features;
        std::array<double, 3> sum{}, sq{};
        for (const auto& p : records) {
            if (p.has_text) ++f.posts_with_text;
            for (std::size_t k = 0; k < 3; ++k) f.lang_counts[k] += p.lang_flags[k];
            if (p.face_vec.count == 0) continue;
            ++f.posts_with_faces;
            const std::array<double, 3> v{static_cast<double>(p.face_vec.count), p.face_vec.confidence,
                                          p.face_vec.area_ratio};
            for (std::size_t k = 0; k < 3; ++k) {
                sum[k] += v[k];
                sq[k] += v[k] * v[k];
            }
        }
        if (f.posts_with_faces > 0) {
            const double n = static_cast<double>(f.posts_with_faces);
            for (std::size_t k = 0; k < 3; ++k) {
                f.face_mean[k] = sum[k] / n;
                f.face_stddev[k] = std::sqrt(std::max(0.0, sq[k] / n - f.face_mean[k] * f.face_mean[k]));
            }
        }
    }

    {
        auto& ls = r.labels;
        ls.hv_labeled = static_cast<std::size_t>(std::count(labels.hv_labeled.begin(), labels.hv_labeled.end(), 1));
        ls.ha_labeled = static_cast<std::size_t>(std::count(labels.ha_labeled.begin(), labels.ha_labeled.end(), 1));
        ls.hv_histogram = top_class_histogram(labels.y_hv, kValueClasses, labels.hv_labeled);
        ls.ha_histogram = top_class_histogram(labels.y_ha, kAttributeClasses, labels.ha_labeled);
        ls.hv_sparse_topn = labels.hv_sparse_topn;
        ls.ha_sparse_topn = labels.ha_sparse_topn;
    }
    return r;
}

void attach_comparison(StatsReport& report, std::span<const double> reference_hv,
                       std::span<const double> reference_ha) {
    auto compare = [](std::span<const double> sub, std::span<const double> ref) {
        DistributionComparison c;
        c.kl = kl_divergence(sub, ref);
        try {
            c.chi2 = chi_square(sub, ref);
        } catch (const DataError& e) {
            c.chi2_note = e.what();
        }
        return c;
    };
    report.comparison = std::array<DistributionComparison, 2>{
        compare(report.labels.hv_histogram, reference_hv), compare(report.labels.ha_histogram, reference_ha)};
}

std::vector<ConsistencyEntry> consistency_report(std::span<const PostRecord> a,
                                                 std::span<const PostRecord> b) {
    std::unordered_map<std::string, const PostRecord*> by_id;
    for (const auto& p : b) by_id.emplace(p.post_id, &p);

    struct Probe {
        const char* name;
        std::vector<double> PostRecord::*field;
        std::size_t n;
    };
    const Probe probes[] = {
        {"scene_top1", &PostRecord::scene_logits, 1},
        {"scene_top5", &PostRecord::scene_logits, kSceneTopN},
        {"attr_top1", &PostRecord::scene_attr_logits, 1},
        {"attr_top10", &PostRecord::scene_attr_logits, kSceneAttrTopN},
        {"value_top1", &PostRecord::hv_logits_a, 1},
        {"value_top3", &PostRecord::hv_logits_a, 3},
    };
    std::vector<ConsistencyEntry> out;
    for (const auto& probe : probes) {
        std::vector<std::vector<std::size_t>> sa, sb;
        for (const auto& p : a) {
            auto it = by_id.find(p.post_id);
            if (it == by_id.end()) continue;
            const auto& x = p.*probe.field;
            const auto& y = it->second->*probe.field;
            if (x.empty() || y.empty()) continue;
            sa.push_back(topn(x, probe.n).indices);
            sb.push_back(topn(y, probe.n).indices);
        }
        out.push_back({probe.name, probe.n, sa.size(), prediction_consistency(sa, sb)});
    }
    return out;
}

}  // namespace herigraph
