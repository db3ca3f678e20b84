#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "herigraph/io.hpp"
#include "herigraph/schema.hpp"
#include "herigraph/synth.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

struct PipelineConfig {
    DatasetPaths inputs;
    std::filesystem::path out = "out";
    unsigned threads = 0;  // 0: one per hardware thread
    GraphConfig graph;
    SynthConfig synth;
    OutputOptions outputs;
    std::filesystem::path reference_stats;  // optional stats.json to compare label histograms with
    std::filesystem::path compare_posts;    // optional second extraction of the same posts

    unsigned worker_count() const;
};

// Applies one `key = value` setting. Unknown keys and unparsable values
// raise DataError. Relative paths resolve against `base`.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value,
                   const std::filesystem::path& base = {});

// Reads a key-value config file ('#' starts a comment). Missing file:
// IoError.
PipelineConfig load_config(const std::filesystem::path& path);

// Config text with every setting, paths relative to `base` when possible.
std::string config_to_text(const PipelineConfig& cfg, const std::filesystem::path& base = {});

enum class Stage { features, labels, graphs, stats, run };

struct PipelineResult {
    Manifest manifest;
    std::vector<std::string> warnings;
};

// ingest -> features -> labels -> graphs -> stats -> export, running only
// what the stage needs and writing that stage's files plus a manifest.
PipelineResult run_stage(const PipelineConfig& cfg, Stage stage);
inline PipelineResult run_pipeline(const PipelineConfig& cfg) { return run_stage(cfg, Stage::run); }

// Writes the synthetic dataset into cfg.out together with dataset.cfg, a
// ready-to-run config pointing at it.
struct SynthResult {
    DatasetPaths paths;
    std::filesystem::path config;
};
SynthResult generate_synthetic(const PipelineConfig& cfg);

ValidationReport validate_inputs(const PipelineConfig& cfg);

}  // namespace herigraph
