// Batch CLI: validate, synth, features, labels, graphs, stats, run.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "herigraph/error.hpp"
#include "herigraph/pipeline.hpp"

using namespace herigraph;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> threads;
    std::vector<std::string> sets;
};

PipelineConfig resolve(const Options& o) {
    PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw DataError("config", "--set expects key=value, got " + kv);
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) cfg.synth.seed = *o.seed;
    if (!o.out.empty()) cfg.out = o.out;
    if (o.threads) cfg.threads = *o.threads;
    return cfg;
}

int report_error(const char* kind, const std::string& module, const std::string& message, int status) {
    ojson j{{"status", "error"}, {"kind", kind}, {"module", module}, {"message", message}};
    std::cerr << j.dump() << '\n';
    return status;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int print_manifest(const PipelineResult& r) {
    print_warnings(r.warnings);
    std::cout << r.manifest.to_json();
    return EXIT_SUCCESS;
}

int cmd_validate(const PipelineConfig& cfg) {
    const auto rep = validate_inputs(cfg);
    print_warnings(rep.warnings);
    ojson list = ojson::array();
    for (const auto& v : rep.violations) {
        list.push_back({{"file", v.file}, {"line", v.line}, {"message", v.message}});
    }
    ojson j{{"status", rep.ok() ? "ok" : "invalid"},
            {"posts", rep.posts},
            {"users", rep.users},
            {"nodes", rep.nodes},
            {"edges", rep.edges},
            {"violations", std::move(list)}};
    std::cout << j.dump(2) << '\n';
    return rep.ok() ? EXIT_SUCCESS : 1;
}

int cmd_synth(const PipelineConfig& cfg) {
    const auto r = generate_synthetic(cfg);
    ojson j{{"status", "ok"},
            {"posts", r.paths.posts.string()},
            {"relations", r.paths.relations.string()},
            {"network_nodes", r.paths.network_nodes.string()},
            {"network_edges", r.paths.network_edges.string()},
            {"config", r.config.string()}};
    std::cout << j.dump(2) << '\n';
    return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-modal heritage post graphs: features, pseudo-labels, multigraph and statistics"};
    app.require_subcommand(1);
    Options opt;

    struct Command {
        const char* name;
        const char* help;
    };
    const Command commands[] = {
        {"validate", "check input files and list every violation"},
        {"synth", "write a deterministic synthetic dataset"},
        {"features", "visual and textual feature matrices"},
        {"labels", "fused pseudo-labels with confidence filters"},
        {"graphs", "temporal, social and spatial layers"},
        {"stats", "graph and label statistics"},
        {"run", "full pipeline"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("-c,--config", opt.config, "key = value config file");
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("-o,--out", opt.out, "output directory");
        sub->add_option("-t,--threads", opt.threads, "worker threads (0 = all cores)");
        sub->add_option("--set", opt.sets, "override a config setting (key=value)");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const PipelineConfig cfg = resolve(opt);
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "validate") return cmd_validate(cfg);
        if (name == "synth") return cmd_synth(cfg);
        if (name == "features") return print_manifest(run_stage(cfg, Stage::features));
        if (name == "labels") return print_manifest(run_stage(cfg, Stage::labels));
        if (name == "graphs") return print_manifest(run_stage(cfg, Stage::graphs));
        if (name == "stats") return print_manifest(run_stage(cfg, Stage::stats));
        return print_manifest(run_pipeline(cfg));
    } catch (const IoError& e) {
        return report_error("io", e.module(), e.what(), 2);
    } catch (const DataError& e) {
        return report_error("data", e.module(), e.what(), 1);
    } catch (const Error& e) {
        return report_error("internal", e.module(), e.what(), 1);
    } catch (const std::exception& e) {
        return report_error("internal", "cli", e.what(), 1);
    }
}
