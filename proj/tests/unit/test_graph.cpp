#include <doctest.h>

#include <cmath>

#include <algorithm>
#include <numeric>

#include <map>
#include <random>
#include <vector>

#include "herigraph/error.hpp"
#include "herigraph/graph.hpp"
#include "herigraph/schema.hpp"
#include "herigraph/synth.hpp"
#include "support/oracles.hpp"
#include "support/testing.hpp"

using namespace herigraph;

namespace {

std::vector<PostRecord> posts_in_weeks(const std::vector<std::int64_t>& weeks) {
    std::vector<PostRecord> out;
    for (std::size_t i = 0; i < weeks.size(); ++i) {
        PostRecord p;
        p.post_id = "p" + std::to_string(i);
        p.user_id = "u";
        p.week_index = weeks[i];
        out.push_back(p);
    }
    return out;
}

UserRelations users(std::size_t n) {
    UserRelations r;
    for (std::size_t i = 0; i < n; ++i) r.add_user("u" + std::to_string(i));
    return r;
}

}  // namespace

TEST_SUITE("graph") {
    TEST_CASE("one-hot time") {
        auto w = one_hot_time(posts_in_weeks({5, 5, 7}));
        CHECK(w.weeks == std::vector<std::int64_t>{5, 7});
        CHECK(w.T.assignment == std::vector<Index>{0, 0, 1});
        CHECK(w.T.rows == 2);
        CHECK(one_hot_time(posts_in_weeks({3, 3, 3})).weeks.size() == 1);

        SyntheticGenerator gen(testing::small_synth(3, 50));
        const auto posts = gen.posts(true);
        const auto axis = one_hot_time(posts);
        std::map<std::int64_t, std::size_t> counts;
        for (const auto& p : posts) ++counts[p.week_index];
        const auto sums = axis.T.row_counts();
        REQUIRE(sums.size() == counts.size());
        std::size_t r = 0;
        for (auto [week, count] : counts) {
            CHECK(axis.weeks[r] == week);
            CHECK(sums[r++] == count);
        }
    }

    TEST_CASE("one-hot user") {
        auto rel = users(3);
        auto posts = posts_in_weeks({1, 1, 1});
        posts[0].user_id = "u2";
        posts[1].user_id = "u0";
        posts[2].user_id = "u2";
        auto U = one_hot_user(posts, rel);
        CHECK(U.rows == 3);
        CHECK(U.assignment == std::vector<Index>{2, 0, 2});
        posts[1].user_id = "nobody";
        CHECK_THROWS_AS(one_hot_user(posts, rel), DataError);

        SyntheticGenerator gen(testing::small_synth(4, 50));
        const auto sp = gen.posts(true);
        const auto su = one_hot_user(sp, gen.relations());
        std::vector<std::size_t> counts(gen.relations().user_count(), 0);
        for (const auto& p : sp) ++counts[*gen.relations().find_user(p.user_id)];
        CHECK(su.row_counts() == counts);
    }

    TEST_CASE("friendship matrix") {
        auto rel = users(3);
        rel.finalize();
        auto F = friendship_matrix(rel);
        CHECK(F.nnz() == 3);
        CHECK(F.diagonal_count() == 3);

        rel.add_contact(0, 1);
        rel.finalize();
        F = friendship_matrix(rel);
        CHECK(F.nnz() == 4);
        CHECK(F.at(0, 1) == 1.0);
        CHECK(F.at(1, 0) == 1.0);
        CHECK(F.at(0, 2) == 0.0);

        std::mt19937_64 rng(5);
        auto big = users(30);
        std::set<std::pair<Index, Index>> pairs;
        for (int k = 0; k < 60; ++k) {
            Index a = rng() % 30, b = rng() % 30;
            if (a == b) continue;
            big.add_contact(a, b);
            pairs.insert(std::minmax(a, b));
        }
        big.finalize();
        F = friendship_matrix(big);
        for (Index a = 0; a < 30; ++a) {
            for (Index b = 0; b < 30; ++b) {
                const bool expect = a == b || pairs.count(std::minmax(a, b));
                CHECK(F.at(a, b) == (expect ? 1.0 : 0.0));
            }
        }
    }

    TEST_CASE("interest matrix") {
        auto rel = users(4);
        rel.add_group(0, "g1");
        rel.add_group(0, "g2");
        rel.add_group(1, "g2");
        rel.add_group(1, "g3");
        rel.add_group(2, "g1");
        rel.finalize();
        const auto I = interest_matrix(rel);
        CHECK(I.at(0, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(I.at(0, 2) == 0.5);
        CHECK(I.at(1, 2) == 0.0);
        CHECK(I.at(0, 0) == 1.0);
        CHECK(I.at(3, 3) == 0.0);
        for (const auto& e : I.entries()) CHECK(e.row != 3);
        for (const auto& e : I.entries()) CHECK(e.col != 3);
    }

    TEST_CASE("temporal kernel") {
        const std::vector<std::int64_t> w{5, 6, 7};
        auto K = temporal_kernel(w, 0.5, false);
        CHECK(K.nnz() == 5);
        CHECK(K.at(0, 1) == 0.5);
        CHECK(K.at(1, 2) == 0.5);
        CHECK(K.at(0, 2) == 0.0);
        CHECK(K.at(1, 1) == 1.0);

        const std::vector<std::int64_t> gap{5, 9};
        CHECK(temporal_kernel(gap, 0.5, false).nnz() == 2);
        CHECK(temporal_kernel(gap, 0.5, true).at(0, 1) == 0.5);
        CHECK(temporal_kernel(w, 0.0, false).nnz() == 3);
    }

    TEST_CASE("social kernel") {
        auto rel = users(4);
        rel.add_contact(0, 1);
        rel.add_group(0, "g1");
        rel.add_group(1, "g1");
        rel.add_group(2, "g1");
        rel.finalize();
        GraphConfig cfg;
        const auto K = social_kernel(friendship_matrix(rel), interest_matrix(rel), cfg);
        CHECK(K.at(0, 0) == 1.0);
        CHECK(K.at(3, 3) == doctest::Approx(2.0 / 3.0));
        CHECK(K.at(0, 1) == doctest::Approx(2.0 / 3.0));
        CHECK(K.at(0, 2) == doctest::Approx(1.0 / 3.0));
        CHECK(K.at(2, 3) == 0.0);
        for (const auto& e : K.entries()) {
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }

        cfg.alpha_U1 = cfg.alpha_U2 = cfg.alpha_U3 = 0.0;
        CHECK_THROWS_AS(social_kernel(friendship_matrix(rel), interest_matrix(rel), cfg), DataError);
    }

    TEST_CASE("interest threshold is strict") {
        auto rel = users(2);
        for (int g = 0; g < 20; ++g) rel.add_group(0, "g" + std::to_string(g));
        rel.add_group(1, "g0");
        rel.finalize();  // IoU = 1/20 = 0.05 exactly at beta
        GraphConfig cfg;
        cfg.beta_U = 1.0 / 20.0;
        const auto K = social_kernel(friendship_matrix(rel), interest_matrix(rel), cfg);
        CHECK(K.at(0, 1) == 0.0);
    }

    TEST_CASE("spatial kernel") {
        FilteredNetwork g;
        g.kept = {0, 1, 2, 3};
        g.edges = {{0, 1, 10.0}, {1, 2, 20.0}, {2, 3, 0.0}};
        GraphConfig cfg;
        auto S = spatial_kernel(g, cfg);
        CHECK(S.at(0, 1) == 0.5);
        CHECK(S.at(1, 2) == 0.0);
        CHECK(S.at(2, 3) == 1.0);
        CHECK(S.at(2, 2) == 1.0);
        CHECK(S.nnz() == 6);
        cfg.spatial_unit_diagonal = false;
        CHECK(spatial_kernel(g, cfg).diagonal_count() == 0);
    }

    TEST_CASE("projection examples") {
        const auto posts = posts_in_weeks({10, 10, 11, 13});
        const auto axis = one_hot_time(posts);
        const std::vector<std::int64_t>& w = axis.weeks;
        const auto A = project_adjacency(axis.T, temporal_kernel(w, 0.5, false));
        CHECK(A.at(0, 1) == 1.0);
        CHECK(A.at(0, 2) == 0.5);
        CHECK(A.at(1, 2) == 0.5);
        CHECK(A.at(2, 3) == 0.0);
        CHECK(A.at(3, 3) == 1.0);

        IndicatorMatrix bad{5, {0, 1}};
        CHECK_THROWS_AS(project_adjacency(bad, temporal_kernel(w, 0.5, false)), DataError);
    }

    TEST_CASE("compose") {
        std::vector<SparseSymMatrix> a{SparseSymMatrix::from_triples(4, {{0, 1, 0.5}}),
                                       SparseSymMatrix::from_triples(4, {{2, 3, 0.2}, {1, 1, 1.0}})};
        auto C = compose_simple(a);
        CHECK(C.nnz() == 2);
        CHECK(C.diagonal_count() == 0);
        for (const auto& e : C.entries()) CHECK(e.weight == 1.0);

        std::vector<SparseSymMatrix> same{a[0], a[0], a[0]};
        CHECK(compose_simple(same).nnz() == 1);

        std::vector<SparseSymMatrix> mismatch{SparseSymMatrix(3), SparseSymMatrix(4)};
        CHECK_THROWS_AS(compose_simple(mismatch), DataError);
    }

    TEST_CASE("sparse construction equals the dense pairwise rules") {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            CAPTURE(seed);
            SyntheticGenerator gen(testing::small_synth(seed, 40 + 20 * seed));
            const auto posts = gen.posts(true);
            GraphConfig cfg;
            cfg.temporal_set_rank = seed % 2 == 0;
            const auto built = build_graphs(posts, gen.relations(), gen.network(), cfg, 1 + seed % 3);
            const auto dense = oracle::dense_graphs(posts, gen.relations(), gen.network(), cfg);
            for (std::size_t l = 0; l < 3; ++l) {
                const auto got = oracle::to_pairs(built.graph.layers[l]);
                CAPTURE(l);
                REQUIRE(got.size() == dense.layers[l].size());
                for (const auto& [key, w] : dense.layers[l]) {
                    auto it = got.find(key);
                    REQUIRE(it != got.end());
                    CHECK(it->second == doctest::Approx(w).epsilon(1e-12));
                }
                CHECK(built.graph.layers[l].diagonal_count() == 0);
            }
            CHECK(oracle::to_pairs(built.graph.composed) == dense.composed);
        }
    }

    TEST_CASE("layer weight laws") {
        SyntheticGenerator gen(testing::small_synth(11, 200));
        const auto posts = gen.posts(true);
        GraphConfig cfg;
        const auto b = build_graphs(posts, gen.relations(), gen.network(), cfg);
        for (const auto& e : b.graph.layer(Layer::temporal).entries()) {
            CHECK((e.weight == 1.0 || e.weight == cfg.alpha_T));
        }
        for (const auto& e : b.graph.layer(Layer::social).entries()) {
            const double third = e.weight * 3.0;
            CHECK(std::abs(third - std::round(third)) < 1e-12);
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }
        for (const auto& e : b.graph.layer(Layer::spatial).entries()) {
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }
        // Same user implies a SOC edge weighted by that user's kernel diagonal.
        const auto& soc = b.graph.layer(Layer::social);
        for (Index i = 0; i < posts.size(); ++i) {
            for (Index j = i + 1; j < posts.size(); ++j) {
                if (posts[i].user_id != posts[j].user_id) continue;
                const Index u = b.users.assignment[i];
                CHECK(soc.at(i, j) == b.social_kernel.at(u, u));
            }
        }
    }

    TEST_CASE("projection is independent of thread count") {
        SyntheticGenerator gen(testing::small_synth(21, 400));
        const auto posts = gen.posts(true);
        const auto a = build_graphs(posts, gen.relations(), gen.network(), GraphConfig{}, 1);
        const auto b = build_graphs(posts, gen.relations(), gen.network(), GraphConfig{}, 4);
        for (std::size_t l = 0; l < 3; ++l) CHECK(a.graph.layers[l] == b.graph.layers[l]);
        CHECK(a.graph.composed == b.graph.composed);
    }

    TEST_CASE("three-post fixture layers") {
        const auto ds = ingest_dataset(testing::three_posts());
        const auto b = build_graphs(ds.posts, ds.relations, ds.network, GraphConfig{});
        const auto& g = b.graph;
        CHECK(oracle::to_pairs(g.layer(Layer::temporal)) == oracle::Pairs{{{0, 1}, 0.5}});
        const auto soc = oracle::to_pairs(g.layer(Layer::social));
        REQUIRE(soc.size() == 3);
        CHECK(soc.at({0, 2}) == 1.0);
        CHECK(soc.at({0, 1}) == doctest::Approx(2.0 / 3.0));
        CHECK(soc.at({1, 2}) == doctest::Approx(2.0 / 3.0));
        CHECK(oracle::to_pairs(g.layer(Layer::spatial)) == oracle::Pairs{{{0, 1}, 0.75}, {{1, 2}, 0.5}});
        CHECK(g.total_layer_entries() == 6);
        CHECK(g.composed.nnz() == 3);
        CHECK(b.spatial.network.kept.size() == 3);
        CHECK(b.spatial.edges_over_cutoff == 1);
    }
}
