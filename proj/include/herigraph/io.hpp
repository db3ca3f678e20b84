#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "herigraph/features.hpp"
#include "herigraph/graph.hpp"
#include "herigraph/labels.hpp"
#include "herigraph/stats.hpp"

namespace herigraph {

class ByteSink {
public:
    virtual ~ByteSink() = default;
    virtual void write(std::string_view bytes) = 0;
};

class StringSink : public ByteSink {
public:
    void write(std::string_view bytes) override { data.append(bytes); }
    std::string data;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// File serialisers. Every real number is written in its shortest
// round-trip decimal form, so reading a file back is bit-exact.
void write_post_order(ByteSink& out, std::span<const std::string> post_ids);
void write_feature_csv(ByteSink& out, const FeatureMatrix& m, std::span<const std::string> post_ids);
void write_labels_csv(ByteSink& out, const LabelBundle& labels, std::span<const std::string> post_ids);
void write_layers_csv(ByteSink& out, const MultiGraph& graph);
void write_composed_edgelist(ByteSink& out, const MultiGraph& graph,
                             std::span<const std::string> post_ids);
void write_rank_size_csv(ByteSink& out, const StatsReport& report);
std::string stats_to_json(const StatsReport& report);

std::size_t label_row_count();

std::vector<std::string> read_post_order(const std::filesystem::path& path);
// Returns the matrix and the post_id header.
std::pair<FeatureMatrix, std::vector<std::string>> read_feature_csv(const std::filesystem::path& path);
// Sparse top-n counts are not stored and read back as zero.
std::pair<LabelBundle, std::vector<std::string>> read_labels_csv(const std::filesystem::path& path);
MultiGraph read_layers_csv(const std::filesystem::path& path, std::size_t posts);
// (hv, ha) histograms of labeled posts from a stats.json.
std::pair<std::vector<double>, std::vector<double>> read_label_histograms(
    const std::filesystem::path& stats_json);

struct ManifestEntry {
    std::string name;
    std::size_t records = 0;
    std::string sha256;
};

struct Manifest {
    std::size_t post_count = 0;
    std::vector<ManifestEntry> files;

    std::string to_json() const;
    const ManifestEntry* find(std::string_view name) const;
};

// Writes files into one directory, hashing them on the way, and closes
// with manifest.json. Throws IoError when the directory or a file cannot
// be written.
class OutputWriter {
public:
    OutputWriter(std::filesystem::path dir, std::size_t post_count);

    template <class Producer>
    void add(const std::string& name, std::size_t records, Producer&& produce) {
        auto file = open(name);
        produce(as_sink(*file));
        close(std::move(file), name, records);
    }

    const Manifest& finish();
    const std::filesystem::path& dir() const { return dir_; }

private:
    class File;
    struct FileDeleter {
        void operator()(File* f) const;
    };
    using FilePtr = std::unique_ptr<File, FileDeleter>;

    static ByteSink& as_sink(File& f);
    FilePtr open(const std::string& name);
    void close(FilePtr file, const std::string& name, std::size_t records);

    std::filesystem::path dir_;
    Manifest manifest_;
};

struct OutputOptions {
    bool composed_edgelist = false;  // composed_edges.txt
    bool rank_size_csv = false;      // rank_size.csv
};

// post_order.csv, features_visual.csv, features_textual.csv, labels.csv,
// graph_layers.csv, stats.json (+ optional extras) and manifest.json.
// Throws DataError("empty dataset") when K = 0.
Manifest export_outputs(std::span<const std::string> post_ids, const FeatureMatrix& visual,
                        const FeatureMatrix& textual, const LabelBundle& labels,
                        const MultiGraph& graph, const StatsReport& stats,
                        const std::filesystem::path& out_dir, const OutputOptions& options = {});

}  // namespace herigraph
