#include <doctest.h>

#include <algorithm>
#include <numeric>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "herigraph/error.hpp"
#include "herigraph/features.hpp"
#include "herigraph/io.hpp"
#include "herigraph/labels.hpp"
#include "herigraph/stats.hpp"
#include "herigraph/synth.hpp"
#include "support/testing.hpp"

using namespace herigraph;

namespace {

struct Built {
    std::vector<PostRecord> posts;
    std::vector<std::string> ids;
    FeatureMatrix visual, textual;
    LabelBundle labels;
    GraphBuild graphs;
    StatsReport stats;
};

Built build(std::uint64_t seed, std::size_t posts) {
    SyntheticGenerator gen(testing::small_synth(seed, posts));
    Built b;
    b.posts = gen.posts();
    for (const auto& p : b.posts) b.ids.push_back(p.post_id);
    b.visual = assemble_visual(b.posts);
    b.textual = assemble_textual(b.posts);
    b.labels = build_label_bundle(b.posts, GraphConfig{});
    b.graphs = build_graphs(b.posts, gen.relations(), gen.network(), GraphConfig{});
    b.stats = build_report(b.posts, b.graphs, b.labels, gen.network());
    return b;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("sha256 known answers") {
        CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    TEST_CASE("exports read back bit-exactly") {
        testing::TempDir dir("io");
        const auto b = build(1, 150);
        const auto m = export_outputs(b.ids, b.visual, b.textual, b.labels, b.graphs.graph, b.stats, dir.path());

        CHECK(read_post_order(dir / "post_order.csv") == b.ids);

        auto [vis, vis_ids] = read_feature_csv(dir / "features_visual.csv");
        CHECK(vis_ids == b.ids);
        CHECK(vis == b.visual);
        auto [txt, txt_ids] = read_feature_csv(dir / "features_textual.csv");
        CHECK(txt == b.textual);

        auto [lab, lab_ids] = read_labels_csv(dir / "labels.csv");
        CHECK(lab_ids == b.ids);
        auto expect = b.labels;
        expect.hv_sparse_topn = expect.ha_sparse_topn = 0;
        CHECK(lab == expect);

        const auto g = read_layers_csv(dir / "graph_layers.csv", b.ids.size());
        for (std::size_t l = 0; l < 3; ++l) CHECK(g.layers[l] == b.graphs.graph.layers[l]);
        CHECK(g.composed == b.graphs.graph.composed);

        const auto [hv, ha] = read_label_histograms(dir / "stats.json");
        CHECK(hv == b.stats.labels.hv_histogram);
        CHECK(ha == b.stats.labels.ha_histogram);

        REQUIRE(m.find("graph_layers.csv"));
        CHECK(m.find("graph_layers.csv")->records == b.graphs.graph.total_layer_entries());
        CHECK(line_count(testing::slurp(dir / "graph_layers.csv")) == b.graphs.graph.total_layer_entries() + 1);
        CHECK(m.find("features_visual.csv")->records == kVisualDim);
        CHECK(m.find("features_textual.csv")->records == kTextualDim);
        CHECK(m.find("labels.csv")->records == label_row_count());
        CHECK(m.post_count == b.ids.size());
        CHECK(m.files.size() == 6);
        for (const auto& f : m.files) CHECK(f.sha256 == sha256_file(dir / f.name));

        const auto manifest = nlohmann::json::parse(testing::slurp(dir / "manifest.json"));
        CHECK(manifest == nlohmann::json::parse(m.to_json()));
    }

    TEST_CASE("csv shapes") {
        const auto b = build(2, 20);
        StringSink s;
        write_feature_csv(s, b.visual, b.ids);
        CHECK(line_count(s.data) == kVisualDim + 1);
        CHECK(s.data.rfind("feature,p", 0) == 0);

        StringSink l;
        write_labels_csv(l, b.labels, b.ids);
        CHECK(line_count(l.data) == label_row_count() + 1);

        StringSink g;
        write_layers_csv(g, b.graphs.graph);
        CHECK(g.data.rfind("layer,row,col,weight\n", 0) == 0);
        std::istringstream in(g.data);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const auto c3 = line.find(',', c2 + 1);
            CHECK(std::stoul(line.substr(c1 + 1, c2 - c1 - 1)) < std::stoul(line.substr(c2 + 1, c3 - c2 - 1)));
        }
    }

    TEST_CASE("optional extras") {
        testing::TempDir dir("io");
        const auto b = build(3, 60);
        OutputOptions opt;
        opt.composed_edgelist = opt.rank_size_csv = true;
        const auto m = export_outputs(b.ids, b.visual, b.textual, b.labels, b.graphs.graph, b.stats, dir.path(), opt);
        CHECK(m.files.size() == 8);
        const auto edges = testing::slurp(dir / "composed_edges.txt");
        CHECK(line_count(edges) == b.graphs.graph.composed.nnz());
        CHECK(m.find("rank_size.csv") != nullptr);
    }

    TEST_CASE("unwritable output directory") {
        testing::TempDir dir("io");
        testing::spit(dir / "blocker", "x");
        const auto b = build(4, 10);
        CHECK_THROWS_AS(export_outputs(b.ids, b.visual, b.textual, b.labels, b.graphs.graph, b.stats,
                                       dir / "blocker" / "out"),
                        IoError);
    }

    TEST_CASE("empty dataset") {
        testing::TempDir dir("io");
        CHECK_THROWS_WITH_AS(export_outputs({}, FeatureMatrix{}, FeatureMatrix{}, LabelBundle{}, MultiGraph{},
                                            StatsReport{}, dir.path()),
                             "empty dataset", DataError);
    }

    TEST_CASE("stats json is stable") {
        const auto b = build(5, 80);
        const auto text = stats_to_json(b.stats);
        CHECK(text == stats_to_json(b.stats));
        const auto j = nlohmann::json::parse(text);
        CHECK(j.contains("layers"));
    }
}
