#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>
#include <cmath>

#include "herigraph/schema.hpp"
#include "herigraph/synth.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return HERIGRAPH_FIXTURES; }

inline herigraph::DatasetPaths three_posts() {
    const auto d = fixture_dir() / "three_posts";
    return {d / "posts.ndjson", d / "relations.json", d / "nodes.csv", d / "edges.csv"};
}

// Fresh directory under the build tree, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static unsigned counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("herigraph_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Copies the three-post fixture so tests can corrupt it.
inline herigraph::DatasetPaths copy_fixture(const TempDir& dir) {
    const auto src = three_posts();
    herigraph::DatasetPaths dst{dir / "posts.ndjson", dir / "relations.json", dir / "nodes.csv",
                                dir / "edges.csv"};
    std::filesystem::copy_file(src.posts, dst.posts);
    std::filesystem::copy_file(src.relations, dst.relations);
    std::filesystem::copy_file(src.network_nodes, dst.network_nodes);
    std::filesystem::copy_file(src.network_edges, dst.network_edges);
    return dst;
}

inline herigraph::SynthConfig small_synth(std::uint64_t seed, std::size_t posts = 120) {
    herigraph::SynthConfig c;
    c.seed = seed;
    c.posts = posts;
    c.users = 25;
    c.week_span = 20;
    c.groups = 40;
    c.groups_per_user = 2;
    c.contacts_per_user = 1;
    c.grid = 6;
    return c;
}

// Random point on the probability simplex with some exact zeros and ties.
template <class Rng>
std::vector<double> random_simplex(Rng& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(d);
    const int style = static_cast<int>(rng() % 4);
    double sum = 0.0;
    for (auto& x : v) {
        if (style == 0) {
            x = -std::log(1.0 - u(rng));
        } else if (style == 1) {
            x = u(rng) < 0.7 ? 0.0 : u(rng);
        } else if (style == 2) {
            x = static_cast<double>(rng() % 4);  // many ties
        } else {
            x = std::pow(u(rng), 8.0);
        }
        sum += x;
    }
    if (sum == 0.0) {
        v[rng() % d] = 1.0;
        return v;
    }
    for (auto& x : v) x /= sum;
    return v;
}

}  // namespace testing
