#include "herigraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <span>

#include "herigraph/error.hpp"
#include "herigraph/features.hpp"
#include "herigraph/parallel.hpp"
#include "herigraph/rng.hpp"
#include "herigraph/spatial.hpp"
#include "herigraph/week.hpp"

namespace herigraph {

namespace {

// Stream tags; a post's draws for one tag never depend on another tag.
enum Stream : std::uint64_t {
    kNoText = 1,
    kNodes,
    kEdges,
    kUsers,
    kContext,
    kFace,
    kLang,
    kVisual,
    kScene,
    kAttr,
    kText,
    kValues,
    kAttributes,
};

std::string padded(char prefix, std::size_t i, std::size_t count) {
    const std::size_t width = std::to_string(count == 0 ? 0 : count - 1).size();
    std::string digits = std::to_string(i);
    return prefix + std::string(width - digits.size(), '0') + digits;
}

GeoPoint offset(GeoPoint p, double north_m, double east_m) {
    const double rad = 180.0 / std::numbers::pi;
    return {p.lat + north_m / kEarthRadiusM * rad,
            p.lon + east_m / (kEarthRadiusM * std::cos(p.lat / rad)) * rad};
}

std::vector<double> dirichlet(CounterRng& rng, double alpha, std::size_t d) {
    std::vector<double> v(d);
    rng.dirichlet(alpha, v);
    return v;
}

std::vector<double> normals(CounterRng& rng, std::size_t d) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.normal();
    return v;
}

// A second annotator that either echoes the first with noise or disagrees.
std::vector<double> second_opinion(CounterRng& rng, const std::vector<double>& first, double alpha,
                                   double agree_prob) {
    auto other = dirichlet(rng, alpha, first.size());
    if (!rng.bernoulli(agree_prob)) return other;
    double sum = 0.0;
    for (std::size_t k = 0; k < other.size(); ++k) {
        other[k] = 0.7 * first[k] + 0.3 * other[k];
        sum += other[k];
    }
    for (double& x : other) x /= sum;
    return other;
}

}  // namespace

void SynthConfig::validate() const {
    auto fail = [](const std::string& m) { throw DataError("synth", m); };
    if (posts == 0) fail("synthetic dataset needs at least one post");
    if (users == 0) fail("synth.users must be positive");
    if (week_span == 0) fail("synth.week_span must be positive");
    if (groups == 0) fail("synth.groups must be positive");
    if (grid < 1) fail("synth.grid must be positive");
    if (!(grid_spacing_m > 0.0)) fail("synth.grid_spacing_m must be positive");
    if (!(speed_kmh > 0.0)) fail("synth.speed_kmh must be positive");
    if (!(dirichlet_alpha > 0.0)) fail("synth.dirichlet_alpha must be positive");
    for (auto [name, p] : {std::pair{"synth.no_text_fraction", no_text_fraction},
                           std::pair{"synth.face_fraction", face_fraction},
                           std::pair{"synth.agree_prob", agree_prob}}) {
        if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
    }
    if (!(center.lat > -80.0 && center.lat < 80.0) || !(center.lon > -170.0 && center.lon < 170.0)) {
        fail("synth.center must stay away from the poles and the antimeridian");
    }
    if (start_year < 1 || start_year > 9000) fail("synth.start_year out of range");
}

SyntheticGenerator::SyntheticGenerator(SynthConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    first_week_ = iso_week_ordinal({cfg_.start_year, 1});

    // Exactly round(fraction * K) posts without text, chosen by a partial
    // Fisher-Yates shuffle.
    const std::size_t K = cfg_.posts;
    const auto no_text = static_cast<std::size_t>(std::llround(cfg_.no_text_fraction * static_cast<double>(K)));
    std::vector<std::uint32_t> order(K);
    for (std::size_t i = 0; i < K; ++i) order[i] = static_cast<std::uint32_t>(i);
    CounterRng rng(cfg_.seed, kNoText);
    no_text_.assign(K, 0);
    for (std::size_t i = 0; i < no_text; ++i) {
        const std::size_t j = i + rng.below(K - i);
        std::swap(order[i], order[j]);
        no_text_[order[i]] = 1;
    }

    build_network();
    build_relations();
}

void SyntheticGenerator::build_network() {
    const std::size_t n = cfg_.grid;
    const double s = cfg_.grid_spacing_m;
    const double half = static_cast<double>(n - 1) / 2.0;
    network_.nodes.reserve(n * n);
    node_cdf_.reserve(n * n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t i = r * n + c;
            CounterRng rng(cfg_.seed, kNodes, i);
            const double north = (static_cast<double>(r) - half) * s + rng.uniform(-0.1, 0.1) * s;
            const double east = (static_cast<double>(c) - half) * s + rng.uniform(-0.1, 0.1) * s;
            network_.nodes.push_back({padded('v', i, n * n), offset(cfg_.center, north, east)});
            // Popularity is heavy-tailed: a few intersections draw most posts.
            const double u = rng.uniform();
            total += u * u * u;
            node_cdf_.push_back(total);
        }
    }
    for (double& x : node_cdf_) x /= total;

    const double metres_per_min = cfg_.speed_kmh * 1000.0 / 60.0;
    auto link = [&](std::size_t a, std::size_t b) {
        CounterRng rng(cfg_.seed, kEdges, a * n * n + b);
        const double length = haversine_m(network_.nodes[a].geo, network_.nodes[b].geo);
        const double congestion = rng.uniform(0.2, 1.0);
        network_.edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                  length / (metres_per_min * congestion)});
    };
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t i = r * n + c;
            if (c + 1 < n) link(i, i + 1);
            if (r + 1 < n) link(i, i + n);
        }
    }
    std::sort(network_.edges.begin(), network_.edges.end(),
              [](const NetworkEdge& x, const NetworkEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
}

void SyntheticGenerator::build_relations() {
    const std::size_t U = cfg_.users;
    for (std::size_t u = 0; u < U; ++u) relations_.add_user(padded('u', u, U));
    std::vector<std::string> group_names(cfg_.groups);
    for (std::size_t g = 0; g < cfg_.groups; ++g) group_names[g] = padded('g', g, cfg_.groups);
    for (std::size_t u = 0; u < U; ++u) {
        CounterRng rng(cfg_.seed, kUsers, u);
        const auto self = static_cast<std::uint32_t>(u);
        for (std::size_t k = 0; k < cfg_.contacts_per_user && U > 1; ++k) {
            auto other = static_cast<std::uint32_t>(rng.below(U - 1));
            if (other >= self) ++other;
            relations_.add_contact(self, other);
        }
        const std::size_t count = rng.below(2 * cfg_.groups_per_user + 1);
        for (std::size_t k = 0; k < count; ++k) {
            const double x = rng.uniform();
            const auto g = std::min(cfg_.groups - 1, static_cast<std::size_t>(static_cast<double>(cfg_.groups) * x * x));
            relations_.add_group(self, group_names[g]);
        }
    }
    relations_.finalize();
}

std::size_t SyntheticGenerator::pick_node(double u) const {
    const auto it = std::upper_bound(node_cdf_.begin(), node_cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - node_cdf_.begin()), node_cdf_.size() - 1);
}

std::string SyntheticGenerator::post_id(std::size_t i) const { return padded('p', i, cfg_.posts); }

PostRecord SyntheticGenerator::post(std::size_t i, bool context_only) const {
    PostRecord p;
    p.post_id = post_id(i);
    p.has_text = has_text(i);
    {
        CounterRng rng(cfg_.seed, kContext, i);
        p.user_id = relations_.users()[rng.below(cfg_.users)];
        p.week_index = first_week_ + static_cast<std::int64_t>(rng.below(cfg_.week_span));
        const auto& node = network_.nodes[pick_node(rng.uniform())];
        const double jitter = 0.05 * cfg_.grid_spacing_m;
        p.geo = offset(node.geo, jitter * rng.normal(), jitter * rng.normal());
    }
    if (context_only) return p;

    const double alpha = cfg_.dirichlet_alpha;
    {
        CounterRng rng(cfg_.seed, kFace, i);
        if (rng.bernoulli(cfg_.face_fraction)) {
            p.face_vec = {static_cast<std::int64_t>(1 + rng.below(4)), rng.uniform(0.5, 1.0),
                          rng.uniform(0.01, 0.5)};
        }
    }
    if (p.has_text) {
        CounterRng rng(cfg_.seed, kLang, i);
        std::vector<std::string> langs(1 + rng.below(3));
        for (auto& code : langs) {
            const double u = rng.uniform();
            code = u < 0.5 ? "en" : u < 0.8 ? cfg_.local_lang : u < 0.9 ? "fr" : "de";
        }
        p.lang_flags = language_flag_vector(langs, cfg_.local_lang);
    }
    {
        CounterRng rng(cfg_.seed, kVisual, i);
        p.vis_hidden = normals(rng, kVisHiddenDim);
    }
    {
        CounterRng rng(cfg_.seed, kScene, i);
        p.scene_logits = dirichlet(rng, alpha, kSceneDim);
    }
    {
        CounterRng rng(cfg_.seed, kAttr, i);
        p.scene_attr_logits = dirichlet(rng, alpha, kSceneAttrDim);
    }
    if (p.has_text) {
        CounterRng text(cfg_.seed, kText, i);
        p.text_hidden = normals(text, kTextHiddenDim);
        CounterRng rng(cfg_.seed, kValues, i);
        p.hv_logits_a = dirichlet(rng, alpha, kValueClasses);
        p.hv_logits_b = second_opinion(rng, p.hv_logits_a, alpha, cfg_.agree_prob);
    }
    {
        CounterRng rng(cfg_.seed, kAttributes, i);
        p.ha_logits_a = dirichlet(rng, alpha, kAttributeClasses);
        p.ha_logits_b = second_opinion(rng, p.ha_logits_a, alpha, cfg_.agree_prob);
    }
    return p;
}

std::vector<PostRecord> SyntheticGenerator::posts(bool context_only, unsigned threads) const {
    std::vector<PostRecord> out(cfg_.posts);
    parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = post(i, context_only);
    });
    return out;
}

DatasetPaths write_synthetic(const SyntheticGenerator& gen, const std::filesystem::path& dir,
                             unsigned threads) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("synth", "cannot create output directory " + dir.string());
    }
    DatasetPaths paths{dir / "posts.ndjson", dir / "relations.json", dir / "nodes.csv", dir / "edges.csv"};

    std::ofstream out(paths.posts, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("synth", "cannot write " + paths.posts.string());
    constexpr std::size_t kChunk = 512;
    const std::size_t K = gen.config().posts;
    std::vector<std::string> lines;
    for (std::size_t start = 0; start < K; start += kChunk) {
        const std::size_t n = std::min(kChunk, K - start);
        lines.assign(n, {});
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) lines[k] = post_to_ndjson(gen.post(start + k));
        });
        for (const auto& l : lines) out << l << '\n';
    }
    out.close();
    if (!out) throw IoError("synth", "cannot write " + paths.posts.string());

    write_relations(paths.relations, gen.relations());
    write_network(paths.network_nodes, paths.network_edges, gen.network());
    return paths;
}

}  // namespace herigraph
