#include <doctest.h>

#include <cmath>

#include <algorithm>
#include <numeric>

#include <random>
#include <vector>

#include "herigraph/error.hpp"
#include "herigraph/labels.hpp"
#include "herigraph/synth.hpp"
#include "support/testing.hpp"

using namespace herigraph;

namespace {

std::vector<double> one_hot(std::size_t d, std::size_t k) {
    std::vector<double> v(d, 0.0);
    v[k] = 1.0;
    return v;
}

PostRecord labelled_post(bool text) {
    PostRecord p;
    p.post_id = "x";
    p.has_text = text;
    p.ha_logits_a = p.ha_logits_b = one_hot(kAttributeClasses, 2);
    if (text) p.hv_logits_a = p.hv_logits_b = one_hot(kValueClasses, 4);
    return p;
}

}  // namespace

TEST_SUITE("labels") {
    TEST_CASE("fusion examples") {
        CHECK(fuse_soft_labels(one_hot(4, 2), one_hot(4, 2), 4) == one_hot(4, 2));
        CHECK(fuse_soft_labels({}, {}, 11) == std::vector<double>(11, 0.0));
        CHECK(fuse_soft_labels(std::vector<double>{1, 0}, std::vector<double>{0, 1}, 2) ==
              std::vector<double>{0.5, 0.5});
        CHECK_THROWS_AS(fuse_soft_labels(one_hot(2, 0), {}, 2), DataError);
        CHECK_THROWS_AS(fuse_soft_labels(one_hot(3, 0), one_hot(3, 0), 2), DataError);
    }

    TEST_CASE("fused simplexes stay simplexes") {
        std::mt19937_64 rng(1);
        for (int t = 0; t < 500; ++t) {
            const auto a = testing::random_simplex(rng, 11);
            const auto b = testing::random_simplex(rng, 11);
            double sum = 0;
            for (double x : fuse_soft_labels(a, b, 11)) {
                REQUIRE(x >= 0.0);
                sum += x;
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }

    TEST_CASE("confidence examples") {
        auto k = label_confidence(one_hot(11, 3), one_hot(11, 3), 1);
        CHECK(k.confidence == 1.0);
        CHECK(k.agreement == 1.0);

        const std::vector<double> u(11, 1.0 / 11.0);
        k = label_confidence(u, u, 3);
        CHECK(k.confidence == doctest::Approx(3.0 / 11.0));
        CHECK(k.agreement == 1.0);

        k = label_confidence(one_hot(11, 0), one_hot(11, 1), 1);
        CHECK(k.confidence == 1.0);
        CHECK(k.agreement == 0.0);

        CHECK_THROWS_AS(label_confidence(u, u, 12), DataError);
        CHECK_THROWS_AS(label_confidence(u, one_hot(9, 0), 1), DataError);
    }

    TEST_CASE("confidence grows with n") {
        std::mt19937_64 rng(2);
        for (int t = 0; t < 300; ++t) {
            const auto a = testing::random_simplex(rng, 11);
            const auto b = testing::random_simplex(rng, 11);
            for (std::size_t n = 1; n < 11; ++n) {
                CHECK(label_confidence(a, b, n + 1).confidence >= label_confidence(a, b, n).confidence);
            }
        }
    }

    TEST_CASE("bundle filters") {
        GraphConfig cfg;
        auto text = labelled_post(true);
        auto no_text = labelled_post(false);
        const auto b = build_label_bundle(std::vector<PostRecord>{text, no_text}, cfg);
        CHECK(b.hv_labeled == std::vector<std::uint8_t>{1, 0});
        CHECK(b.ha_labeled == std::vector<std::uint8_t>{1, 1});
        for (std::size_t c = 0; c < kValueClasses; ++c) CHECK(b.hv(1)[c] == 0.0);
        CHECK(b.k_hv[2] == 0.0);
        CHECK(b.k_hv[3] == 0.0);
        CHECK(b.hv(0)[4] == 1.0);
        // One-hot pairs have a single nonzero entry, fewer than hv_top_n = 3.
        CHECK(b.hv_sparse_topn == 1);
        CHECK(b.ha_sparse_topn == 0);
    }

    TEST_CASE("confidence exactly at the threshold is rejected") {
        // Top-3 entries 0.5, 0.125, 0.125: kappa0 = 0.75 exactly in binary.
        std::vector<double> y(kValueClasses, 0.25 / 8.0);
        y[0] = 0.5;
        y[1] = 0.125;
        y[2] = 0.125;
        auto p = labelled_post(true);
        p.hv_logits_a = p.hv_logits_b = y;
        GraphConfig cfg;
        const auto b = build_label_bundle(std::vector<PostRecord>{p}, cfg);
        CHECK(b.k_hv[0] == 0.75);
        CHECK(b.k_hv[1] == 1.0);
        CHECK(b.hv_labeled[0] == 0);

        cfg.hv_conf_min = 0.7499;
        CHECK(build_label_bundle(std::vector<PostRecord>{p}, cfg).hv_labeled[0] == 1);
    }

    TEST_CASE("agreement exactly one passes the attribute filter") {
        std::vector<double> y(kAttributeClasses, 0.25 / 8.0);
        y[5] = 0.75;
        auto p = labelled_post(false);
        p.ha_logits_a = p.ha_logits_b = y;
        const auto b = build_label_bundle(std::vector<PostRecord>{p}, GraphConfig{});
        CHECK(b.k_ha[0] == 0.75);
        CHECK(b.k_ha[1] == 1.0);
        CHECK(b.ha_labeled[0] == 1);
    }

    TEST_CASE("missing annotator outputs are errors") {
        auto p = labelled_post(true);
        p.hv_logits_b.clear();
        CHECK_THROWS_AS(build_label_bundle(std::vector<PostRecord>{p}, GraphConfig{}), DataError);
        auto q = labelled_post(false);
        q.ha_logits_a.clear();
        CHECK_THROWS_AS(build_label_bundle(std::vector<PostRecord>{q}, GraphConfig{}), DataError);
        auto r = labelled_post(false);
        r.hv_logits_a = r.hv_logits_b = one_hot(kValueClasses, 0);
        CHECK_THROWS_AS(build_label_bundle(std::vector<PostRecord>{r}, GraphConfig{}), DataError);
    }

    TEST_CASE("masks follow the records under reordering and threading") {
        SyntheticGenerator gen(testing::small_synth(8, 300));
        auto posts = gen.posts();
        const auto a = build_label_bundle(posts, GraphConfig{}, 1);
        CHECK(a == build_label_bundle(posts, GraphConfig{}, 4));
        std::reverse(posts.begin(), posts.end());
        const auto b = build_label_bundle(posts, GraphConfig{}, 2);
        const std::size_t K = posts.size();
        for (std::size_t i = 0; i < K; ++i) {
            CHECK(a.hv_labeled[i] == b.hv_labeled[K - 1 - i]);
            CHECK(a.ha_labeled[i] == b.ha_labeled[K - 1 - i]);
            CHECK(std::ranges::equal(a.hv(i), b.hv(K - 1 - i)));
        }
        for (std::size_t i = 0; i < K; ++i) {
            if (a.hv_labeled[i]) CHECK(gen.has_text(i));
        }
    }

    TEST_CASE("prediction consistency") {
        using Sets = std::vector<std::vector<std::size_t>>;
        auto c = prediction_consistency(Sets{{0, 1}, {2}}, Sets{{0, 1}, {2}});
        CHECK(c.mean == 1.0);
        CHECK(c.stddev == 0.0);
        c = prediction_consistency(Sets{{0}, {0, 1}}, Sets{{0}, {1, 2}});
        CHECK(c.mean == doctest::Approx(2.0 / 3.0));
        CHECK(c.stddev == doctest::Approx(1.0 / 3.0));
        c = prediction_consistency(Sets{{0}, {1}}, Sets{{1}, {0}});
        CHECK(c.mean == 0.0);
        CHECK(c.stddev == 0.0);
        CHECK_THROWS_AS(prediction_consistency(Sets{{0}}, Sets{}), DataError);
    }
}
