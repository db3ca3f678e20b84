#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "herigraph/schema.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t posts = 100;
    std::size_t users = 20;
    std::size_t week_span = 52;        // posts fall in this many consecutive ISO weeks
    int start_year = 2019;             // ISO year of the first week
    std::size_t groups = 30;
    std::size_t groups_per_user = 3;   // mean; drawn uniformly from [0, 2 * mean]
    std::size_t contacts_per_user = 2;
    std::size_t grid = 10;             // grid x grid street intersections
    double grid_spacing_m = 400.0;
    double speed_kmh = 4.8;            // free-flow walking speed
    double no_text_fraction = 0.3;
    double dirichlet_alpha = 0.3;
    double face_fraction = 0.15;
    double agree_prob = 0.8;           // chance that the second annotator echoes the first
    GeoPoint center{45.4375, 12.3358};
    std::string local_lang = "it";

    // Throws DataError on the first unusable field (posts = 0 included).
    void validate() const;
};

// Deterministic synthetic dataset. Every post is drawn from its own RNG
// substreams, so post(i) can be generated in any order or in parallel.
class SyntheticGenerator {
public:
    explicit SyntheticGenerator(SynthConfig cfg);

    const SynthConfig& config() const { return cfg_; }
    const UserRelations& relations() const { return relations_; }
    const SpatialNetwork& network() const { return network_; }

    bool has_text(std::size_t i) const { return !no_text_[i]; }
    std::string post_id(std::size_t i) const;

    // With context_only, the model-output vectors are left empty; the
    // identifiers, week, location and text flag match the full record.
    PostRecord post(std::size_t i, bool context_only = false) const;
    std::vector<PostRecord> posts(bool context_only = false, unsigned threads = 1) const;

private:
    void build_network();
    void build_relations();
    std::size_t pick_node(double u) const;

    SynthConfig cfg_;
    std::int64_t first_week_ = 0;
    std::vector<std::uint8_t> no_text_;
    std::vector<double> node_cdf_;
    UserRelations relations_;
    SpatialNetwork network_;
};

// posts.ndjson, relations.json, nodes.csv, edges.csv under `dir`.
DatasetPaths write_synthetic(const SyntheticGenerator& gen, const std::filesystem::path& dir,
                             unsigned threads = 1);

}  // namespace herigraph
