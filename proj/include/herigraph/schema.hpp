#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herigraph/types.hpp"

namespace herigraph {

struct DatasetPaths {
    std::filesystem::path posts;          // NDJSON
    std::filesystem::path relations;      // JSON
    std::filesystem::path network_nodes;  // CSV node_id,lat,lon
    std::filesystem::path network_edges;  // CSV src,dst,travel_min
};

struct Dataset {
    std::vector<PostRecord> posts;
    UserRelations relations;
    SpatialNetwork network;
    std::vector<std::string> warnings;
};

struct Violation {
    std::string file;
    std::size_t line = 0;  // 1-based; 0 when the problem is not tied to a line
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    std::size_t posts = 0;
    std::size_t users = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;

    bool ok() const { return violations.empty(); }
};

// Every broken PostRecord invariant, one message each. Empty when valid.
std::vector<std::string> check_post(const PostRecord& record);

// One NDJSON object. Parsing checks types and shapes only; values are
// checked by check_post.
PostRecord parse_post_line(std::string_view line);
std::string post_to_ndjson(const PostRecord& record);

// Reads and fully validates all four files, stopping at the first
// violation (DataError naming file and line). Posts whose user is missing
// from the relations file are registered with no contacts or groups.
// Missing or unreadable files raise IoError.
Dataset ingest_dataset(const DatasetPaths& paths, unsigned threads = 1);

// Posts file alone, fail-fast.
std::vector<PostRecord> read_posts_file(const std::filesystem::path& path, unsigned threads = 1);

// Same checks, but every violation is collected. Only I/O failures throw.
ValidationReport validate_dataset(const DatasetPaths& paths, unsigned threads = 1);

void write_posts(const std::filesystem::path& path, std::span<const PostRecord> records);
void write_relations(const std::filesystem::path& path, const UserRelations& relations);
void write_network(const std::filesystem::path& nodes_path, const std::filesystem::path& edges_path,
                   const SpatialNetwork& network);

}  // namespace herigraph
