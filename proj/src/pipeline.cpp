#include "herigraph/pipeline.hpp"

#include <fstream>

#include "herigraph/error.hpp"
#include "herigraph/features.hpp"
#include "herigraph/graph.hpp"
#include "herigraph/labels.hpp"
#include "herigraph/stats.hpp"

namespace herigraph {

namespace fs = std::filesystem;

PipelineResult run_stage(const PipelineConfig& cfg, Stage stage) {
    cfg.graph.validate();
    const unsigned threads = cfg.worker_count();

    PipelineResult result;
    Dataset data = ingest_dataset(cfg.inputs, threads);
    result.warnings = std::move(data.warnings);
    const auto& posts = data.posts;
    if (posts.empty()) throw DataError("pipeline", "empty dataset");
    std::vector<std::string> ids;
    ids.reserve(posts.size());
    for (const auto& p : posts) ids.push_back(p.post_id);

    const bool want_features = stage == Stage::features || stage == Stage::run;
    const bool want_labels = stage != Stage::features && stage != Stage::graphs;
    const bool want_graphs = stage != Stage::features && stage != Stage::labels;
    const bool want_stats = stage == Stage::stats || stage == Stage::run;

    FeatureMatrix visual, textual;
    if (want_features) {
        visual = assemble_visual(posts, threads);
        textual = assemble_textual(posts, threads);
    }
    LabelBundle labels;
    if (want_labels) labels = build_label_bundle(posts, cfg.graph, threads);
    GraphBuild graphs;
    if (want_graphs) graphs = build_graphs(posts, data.relations, data.network, cfg.graph, threads);
    StatsReport stats;
    if (want_stats) {
        stats = build_report(posts, graphs, labels, data.network);
        if (!cfg.reference_stats.empty()) {
            const auto [hv, ha] = read_label_histograms(cfg.reference_stats);
            attach_comparison(stats, hv, ha);
        }
        if (!cfg.compare_posts.empty()) {
            const auto other = read_posts_file(cfg.compare_posts, threads);
            stats.consistency = consistency_report(posts, other);
        }
    }

    if (stage == Stage::run) {
        result.manifest = export_outputs(ids, visual, textual, labels, graphs.graph, stats, cfg.out, cfg.outputs);
        return result;
    }

    OutputWriter w(cfg.out, posts.size());
    w.add("post_order.csv", ids.size(), [&](ByteSink& s) { write_post_order(s, ids); });
    switch (stage) {
        case Stage::features:
            w.add("features_visual.csv", visual.dim, [&](ByteSink& s) { write_feature_csv(s, visual, ids); });
            w.add("features_textual.csv", textual.dim, [&](ByteSink& s) { write_feature_csv(s, textual, ids); });
            break;
        case Stage::labels:
            w.add("labels.csv", label_row_count(), [&](ByteSink& s) { write_labels_csv(s, labels, ids); });
            break;
        case Stage::graphs:
            w.add("graph_layers.csv", graphs.graph.total_layer_entries(),
                  [&](ByteSink& s) { write_layers_csv(s, graphs.graph); });
            if (cfg.outputs.composed_edgelist) {
                w.add("composed_edges.txt", graphs.graph.composed.nnz(),
                      [&](ByteSink& s) { write_composed_edgelist(s, graphs.graph, ids); });
            }
            break;
        case Stage::stats:
            w.add("stats.json", 1, [&](ByteSink& s) { s.write(stats_to_json(stats)); });
            if (cfg.outputs.rank_size_csv) {
                std::size_t rows = stats.composed.degree_rank_size.size() +
                                   stats.network.posts_per_node_rank_size.size();
                for (const auto& l : stats.layers) rows += l.degree_rank_size.size();
                w.add("rank_size.csv", rows, [&](ByteSink& s) { write_rank_size_csv(s, stats); });
            }
            break;
        case Stage::run:
            break;
    }
    result.manifest = w.finish();
    return result;
}

SynthResult generate_synthetic(const PipelineConfig& cfg) {
    const SyntheticGenerator gen(cfg.synth);
    SynthResult r;
    r.paths = write_synthetic(gen, cfg.out, cfg.worker_count());

    PipelineConfig next = cfg;
    next.inputs = r.paths;
    next.out = cfg.out / "results";
    next.reference_stats.clear();
    next.compare_posts.clear();
    r.config = cfg.out / "dataset.cfg";
    std::ofstream out(r.config, std::ios::binary | std::ios::trunc);
    out << "# synthetic dataset, seed " << cfg.synth.seed << '\n' << config_to_text(next, cfg.out);
    out.close();
    if (!out) throw IoError("synth", "cannot write " + r.config.string());
    return r;
}

ValidationReport validate_inputs(const PipelineConfig& cfg) {
    return validate_dataset(cfg.inputs, cfg.worker_count());
}

}  // namespace herigraph
