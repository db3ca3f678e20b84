#include "herigraph/graph.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "herigraph/error.hpp"
#include "herigraph/parallel.hpp"

namespace herigraph {

namespace {

using Neighbourhood = std::vector<std::pair<Index, double>>;

std::vector<Neighbourhood> kernel_neighbourhoods(const SparseSymMatrix& kernel) {
    std::vector<Neighbourhood> nb(kernel.dim());
    for (const auto& e : kernel.entries()) {
        nb[e.row].emplace_back(e.col, e.weight);
        if (e.row != e.col) nb[e.col].emplace_back(e.row, e.weight);
    }
    return nb;
}

std::size_t members_from(const std::vector<Index>& members, Index first) {
    return static_cast<std::size_t>(
        members.end() - std::lower_bound(members.begin(), members.end(), first));
}

}  // namespace

std::string_view layer_name(Layer layer) {
    switch (layer) {
        case Layer::temporal: return "TEM";
        case Layer::social: return "SOC";
        case Layer::spatial: return "SPA";
    }
    return "?";
}

WeekAxis one_hot_time(std::span<const PostRecord> records) {
    WeekAxis axis;
    axis.weeks.reserve(records.size());
    for (const auto& r : records) axis.weeks.push_back(r.week_index);
    std::sort(axis.weeks.begin(), axis.weeks.end());
    axis.weeks.erase(std::unique(axis.weeks.begin(), axis.weeks.end()), axis.weeks.end());
    axis.T.rows = axis.weeks.size();
    axis.T.assignment.reserve(records.size());
    for (const auto& r : records) {
        auto it = std::lower_bound(axis.weeks.begin(), axis.weeks.end(), r.week_index);
        axis.T.assignment.push_back(static_cast<Index>(it - axis.weeks.begin()));
    }
    return axis;
}

IndicatorMatrix one_hot_user(std::span<const PostRecord> records, const UserRelations& relations) {
    IndicatorMatrix U;
    U.rows = relations.user_count();
    U.assignment.reserve(records.size());
    for (const auto& r : records) {
        auto idx = relations.find_user(r.user_id);
        if (!idx) {
            throw DataError("graph", "post " + r.post_id + " references unknown user " + r.user_id);
        }
        U.assignment.push_back(*idx);
    }
    return U;
}

SparseSymMatrix friendship_matrix(const UserRelations& relations) {
    std::vector<CooEntry> entries;
    entries.reserve(relations.user_count() + relations.contacts().size());
    for (Index j = 0; j < relations.user_count(); ++j) entries.push_back({j, j, 1.0});
    for (auto [a, b] : relations.contacts()) entries.push_back({a, b, 1.0});
    return SparseSymMatrix::from_triples(relations.user_count(), std::move(entries));
}

SparseSymMatrix interest_matrix(const UserRelations& relations) {
    const std::size_t n = relations.user_count();
    std::vector<std::vector<Index>> followers(relations.group_names().size());
    for (Index j = 0; j < n; ++j) {
        for (auto g : relations.groups_of(j)) followers[g].push_back(j);
    }

    std::vector<CooEntry> entries;
    std::vector<std::uint32_t> shared(n, 0);
    std::vector<Index> touched;
    for (Index j = 0; j < n; ++j) {
        const auto& gj = relations.groups_of(j);
        if (gj.empty()) continue;
        entries.push_back({j, j, 1.0});
        touched.clear();
        for (auto g : gj) {
            const auto& f = followers[g];
            for (auto it = std::upper_bound(f.begin(), f.end(), j); it != f.end(); ++it) {
                if (shared[*it]++ == 0) touched.push_back(*it);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (Index k : touched) {
            const std::size_t inter = shared[k];
            const std::size_t uni = gj.size() + relations.groups_of(k).size() - inter;
            entries.push_back({j, k, static_cast<double>(inter) / static_cast<double>(uni)});
            shared[k] = 0;
        }
    }
    return SparseSymMatrix::from_sorted(n, std::move(entries));
}

SparseSymMatrix temporal_kernel(std::span<const std::int64_t> weeks, double alpha, bool set_rank) {
    std::vector<CooEntry> entries;
    entries.reserve(2 * weeks.size());
    for (Index r = 0; r < weeks.size(); ++r) {
        entries.push_back({r, r, 1.0});
        if (r + 1 < weeks.size() && alpha > 0.0 && (set_rank || weeks[r + 1] - weeks[r] == 1)) {
            entries.push_back({r, r + 1, alpha});
        }
    }
    return SparseSymMatrix::from_sorted(weeks.size(), std::move(entries));
}

SparseSymMatrix social_kernel(const SparseSymMatrix& friendship, const SparseSymMatrix& interest,
                              const GraphConfig& cfg) {
    if (friendship.dim() != interest.dim()) {
        throw DataError("graph", "friendship and interest matrices differ in size");
    }
    const double total = cfg.alpha_U1 + cfg.alpha_U2 + cfg.alpha_U3;
    if (!(total > 0.0)) throw DataError("graph", "social kernel weights are all zero");

    std::vector<std::pair<Index, Index>> support;
    support.reserve(friendship.dim() + friendship.nnz() + interest.nnz());
    for (Index j = 0; j < friendship.dim(); ++j) support.emplace_back(j, j);
    for (const auto& e : friendship.entries()) support.emplace_back(e.row, e.col);
    for (const auto& e : interest.entries()) {
        if (e.weight > cfg.beta_U) support.emplace_back(e.row, e.col);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    std::vector<CooEntry> entries;
    entries.reserve(support.size());
    for (auto [r, c] : support) {
        const double self = r == c ? 1.0 : 0.0;
        const double friends = friendship.at(r, c);
        const double common = interest.at(r, c) > cfg.beta_U ? 1.0 : 0.0;
        const double w = (cfg.alpha_U1 * self + cfg.alpha_U2 * friends + cfg.alpha_U3 * common) / total;
        if (w > 0.0) entries.push_back({r, c, w});
    }
    return SparseSymMatrix::from_sorted(friendship.dim(), std::move(entries));
}

SparseSymMatrix spatial_kernel(const FilteredNetwork& network, const GraphConfig& cfg) {
    const std::size_t n = network.kept.size();
    std::vector<CooEntry> entries;
    entries.reserve(n + network.edges.size());
    for (Index v = 0; v < n; ++v) {
        if (cfg.spatial_unit_diagonal) entries.push_back({v, v, 1.0});
    }
    for (const auto& e : network.edges) {
        if (e.travel_min > cfg.max_travel_min) {
            throw DataError("graph", "spatial edge exceeds the travel-time cutoff");
        }
        const double w = (cfg.max_travel_min - e.travel_min) / cfg.max_travel_min;
        if (w > 0.0) entries.push_back({e.a, e.b, w});
    }
    return SparseSymMatrix::from_triples(n, std::move(entries));
}

SparseSymMatrix project_adjacency(const IndicatorMatrix& ind, const SparseSymMatrix& kernel,
                                  unsigned threads) {
    if (kernel.dim() != ind.rows) {
        throw DataError("graph", "kernel size " + std::to_string(kernel.dim()) +
                                     " does not match indicator rows " + std::to_string(ind.rows));
    }
    const std::size_t K = ind.cols();
    const auto members = ind.members();
    const auto nb = kernel_neighbourhoods(kernel);

    // Pass 1: entries (i, j >= i) per post.
    std::vector<std::size_t> offsets(K + 1, 0);
    parallel_for(K, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t count = 0;
            for (auto [c, w] : nb[ind.assignment[i]]) count += members_from(members[c], static_cast<Index>(i));
            offsets[i + 1] = count;
        }
    });
    for (std::size_t i = 0; i < K; ++i) offsets[i + 1] += offsets[i];

    // Pass 2: fill each post's slice and sort it by column.
    std::vector<CooEntry> entries(offsets.back());
    parallel_for(K, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CooEntry* out = entries.data() + offsets[i];
            const auto row = static_cast<Index>(i);
            for (auto [c, w] : nb[ind.assignment[i]]) {
                const auto& m = members[c];
                for (auto it = std::lower_bound(m.begin(), m.end(), row); it != m.end(); ++it) {
                    *out++ = {row, *it, w};
                }
            }
            std::sort(entries.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                      entries.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]),
                      [](const CooEntry& a, const CooEntry& b) { return a.col < b.col; });
        }
    });
    return SparseSymMatrix::from_sorted(K, std::move(entries));
}

SparseSymMatrix compose_simple(std::span<const SparseSymMatrix> layers) {
    if (layers.empty()) return {};
    const std::size_t dim = layers.front().dim();
    std::size_t upper = 0;
    for (const auto& l : layers) {
        if (l.dim() != dim) throw DataError("graph", "layers differ in node count");
        upper += l.nnz();
    }
    std::vector<CooEntry> out;
    out.reserve(upper);
    std::vector<std::size_t> pos(layers.size(), 0);
    for (;;) {
        const CooEntry* next = nullptr;
        for (std::size_t k = 0; k < layers.size(); ++k) {
            const auto e = layers[k].entries();
            while (pos[k] < e.size() && e[pos[k]].row == e[pos[k]].col) ++pos[k];
            if (pos[k] == e.size()) continue;
            const CooEntry& cand = e[pos[k]];
            if (!next || cand.row < next->row || (cand.row == next->row && cand.col < next->col)) {
                next = &cand;
            }
        }
        if (!next) break;
        const CooEntry key{next->row, next->col, 1.0};
        out.push_back(key);
        for (std::size_t k = 0; k < layers.size(); ++k) {
            const auto e = layers[k].entries();
            if (pos[k] < e.size() && e[pos[k]].row == key.row && e[pos[k]].col == key.col) ++pos[k];
        }
    }
    out.shrink_to_fit();
    return SparseSymMatrix::from_sorted(dim, std::move(out));
}

std::size_t MultiGraph::total_layer_entries() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.nnz();
    return n;
}

MultiGraph MultiGraph::from_projections(std::array<SparseSymMatrix, 3> projected) {
    MultiGraph g;
    g.posts = projected[0].dim();
    for (std::size_t k = 0; k < 3; ++k) {
        if (projected[k].dim() != g.posts) throw DataError("graph", "layers differ in node count");
        g.layers[k] = projected[k].diagonal_count() ? projected[k].without_diagonal()
                                                    : std::move(projected[k]);
        projected[k] = SparseSymMatrix{};
    }
    g.composed = compose_simple(g.layers);
    return g;
}

namespace {

GraphDiagnostics social_diagnostics(const UserRelations& relations, const IndicatorMatrix& users,
                                    const SparseSymMatrix& friendship,
                                    const SparseSymMatrix& interest, const GraphConfig& cfg) {
    GraphDiagnostics d;
    const auto posts_of = users.row_counts();
    const std::size_t n = relations.user_count();
    for (Index j = 0; j < n; ++j) {
        if (relations.groups_of(j).empty()) {
            ++d.groupless_users;
            if (posts_of[j] > 0) ++d.groupless_users_with_posts;
        }
    }
    // A user's posts are non-isolated if any partner (including the user's
    // own other posts) carries positive weight with every overlap counted.
    std::vector<std::uint8_t> linked(n, 0);
    auto link = [&](Index a, Index b, double w) {
        if (w <= 0.0) return;
        if (a == b) {
            if (posts_of[a] >= 2) linked[a] = 1;
        } else if (posts_of[a] > 0 && posts_of[b] > 0) {
            linked[a] = linked[b] = 1;
        }
    };
    for (Index j = 0; j < n; ++j) {
        link(j, j, cfg.alpha_U1 + cfg.alpha_U2 * friendship.at(j, j) +
                       cfg.alpha_U3 * (interest.at(j, j) > 0.0 ? 1.0 : 0.0));
    }
    for (const auto& e : friendship.entries()) {
        if (e.row != e.col) link(e.row, e.col, cfg.alpha_U2 * e.weight);
    }
    for (const auto& e : interest.entries()) {
        if (e.row != e.col) link(e.row, e.col, cfg.alpha_U3);
    }
    for (Index j = 0; j < n; ++j) {
        if (linked[j]) d.social_nodes_unthresholded += posts_of[j];
    }
    return d;
}

}  // namespace

GraphBuild build_graphs(std::span<const PostRecord> records, const UserRelations& relations,
                        const SpatialNetwork& network, const GraphConfig& cfg, unsigned threads) {
    cfg.validate();
    if (records.empty()) throw DataError("graph", "empty dataset");
    if (network.nodes.empty()) throw DataError("graph", "spatial network has no nodes");

    GraphBuild b;
    b.time = one_hot_time(records);
    b.users = one_hot_user(records, relations);

    const NearestNodeIndex index(network);
    b.nearest_nodes.resize(records.size());
    parallel_for(records.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) b.nearest_nodes[i] = index.nearest(records[i].geo);
    });
    b.spatial = spatial_subgraph(network, b.nearest_nodes, cfg.max_travel_min);

    b.friendship = friendship_matrix(relations);
    b.interest = interest_matrix(relations);
    b.temporal_kernel = temporal_kernel(b.time.weeks, cfg.alpha_T, cfg.temporal_set_rank);
    b.social_kernel = social_kernel(b.friendship, b.interest, cfg);
    b.spatial_kernel = spatial_kernel(b.spatial.network, cfg);

    b.graph = MultiGraph::from_projections({
        project_adjacency(b.time.T, b.temporal_kernel, threads),
        project_adjacency(b.users, b.social_kernel, threads),
        project_adjacency(b.spatial.S, b.spatial_kernel, threads),
    });
    b.diagnostics = social_diagnostics(relations, b.users, b.friendship, b.interest, cfg);
    return b;
}

}  // namespace herigraph
