#include <doctest.h>

#include <cmath>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "herigraph/error.hpp"
#include "herigraph/features.hpp"
#include "herigraph/synth.hpp"
#include "support/oracles.hpp"
#include "support/testing.hpp"

using namespace herigraph;

namespace {

PostRecord minimal_post(std::string id) {
    PostRecord p;
    p.post_id = std::move(id);
    p.user_id = "u";
    p.vis_hidden.assign(kVisHiddenDim, 0.25);
    p.scene_logits.assign(kSceneDim, 0.0);
    p.scene_logits[3] = 1.0;
    p.scene_attr_logits.assign(kSceneAttrDim, 0.0);
    p.scene_attr_logits[101] = 1.0;
    p.ha_logits_a = p.ha_logits_b = std::vector<double>(kAttributeClasses, 1.0 / 9.0);
    return p;
}

}  // namespace

TEST_SUITE("features") {
    TEST_CASE("soft filter examples") {
        CHECK(nhot_soft_filter(std::vector<double>{1, 0, 0}, 1) == std::vector<double>{1, 0, 0});
        CHECK(nhot_soft_filter(std::vector<double>{0.25, 0.25, 0.25, 0.25}, 2) ==
              std::vector<double>{0.25, 0.25, 0.25, 0.25});
        const auto out = nhot_soft_filter(std::vector<double>{0.7, 0.2, 0.1}, 1);
        CHECK(out[0] == 0.7);
        CHECK(out[1] == doctest::Approx(0.15).epsilon(1e-15));
        CHECK(out[2] == out[1]);
    }

    TEST_CASE("soft filter errors") {
        CHECK_THROWS_AS(nhot_soft_filter(std::vector<double>{0.5, 0.5}, 2), DataError);
        CHECK_THROWS_AS(nhot_soft_filter(std::vector<double>{0.5, 0.5}, 0), DataError);
        CHECK_THROWS_AS(nhot_soft_filter(std::vector<double>{0.5, 0.3}, 1), DataError);
        CHECK_THROWS_AS(nhot_soft_filter(std::vector<double>{1.2, -0.2}, 1), DataError);
        CHECK_NOTHROW(nhot_soft_filter(std::vector<double>{0.5, 0.5 + 5e-7}, 1));
    }

    TEST_CASE("soft filter matches the oracle, keeps top-n and is idempotent") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 2000; ++t) {
            const std::size_t d = 2 + rng() % 60;
            const std::size_t n = 1 + rng() % (d - 1);
            const auto l = testing::random_simplex(rng, d);
            const auto out = nhot_soft_filter(l, n);
            REQUIRE(out == oracle::nhot(l, n));
            const auto again = nhot_soft_filter(out, n);
            for (std::size_t c = 0; c < d; ++c) CHECK(std::abs(again[c] - out[c]) <= 1e-15);
        }
    }

    TEST_CASE("visual layout") {
        auto p = minimal_post("a");
        p.face_vec = {2, 0.5, 0.25};
        const auto m = assemble_visual(std::vector<PostRecord>{p});
        REQUIRE(m.dim == 982);
        REQUIRE(m.cols == 1);
        CHECK(m.at(0, 0) == 0.25);
        CHECK(m.at(512, 0) == 2.0);
        CHECK(m.at(513, 0) == 0.5);
        CHECK(m.at(514, 0) == 0.25);
        // One-hot logits are fixed points of the filter.
        for (std::size_t k = 0; k < kSceneDim; ++k) CHECK(m.at(515 + k, 0) == (k == 3 ? 1.0 : 0.0));
        for (std::size_t k = 0; k < kSceneAttrDim; ++k) CHECK(m.at(880 + k, 0) == (k == 101 ? 1.0 : 0.0));
    }

    TEST_CASE("visual columns equal independently filtered blocks") {
        SyntheticGenerator gen(testing::small_synth(3, 3));
        const auto posts = gen.posts();
        const auto m = assemble_visual(posts, 2);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto col = m.column(i);
            const auto s = oracle::nhot(posts[i].scene_logits, 5);
            const auto a = oracle::nhot(posts[i].scene_attr_logits, 10);
            CHECK(std::equal(posts[i].vis_hidden.begin(), posts[i].vis_hidden.end(), col.begin()));
            CHECK(std::equal(s.begin(), s.end(), col.begin() + 515));
            CHECK(std::equal(a.begin(), a.end(), col.begin() + 880));
            double scene_sum = 0, attr_sum = 0;
            for (std::size_t k = 515; k < 880; ++k) scene_sum += col[k];
            for (std::size_t k = 880; k < 982; ++k) attr_sum += col[k];
            CHECK(std::abs(scene_sum - 1.0) < 1e-6);
            CHECK(std::abs(attr_sum - 1.0) < 1e-6);
        }
    }

    TEST_CASE("textual layout") {
        auto with_text = minimal_post("t");
        with_text.has_text = true;
        with_text.text_hidden.assign(kTextHiddenDim, -1.5);
        with_text.lang_flags = {1, 1, 0};
        auto without = minimal_post("n");
        const auto m = assemble_textual(std::vector<PostRecord>{with_text, without});
        REQUIRE(m.dim == 771);
        CHECK(m.at(0, 0) == -1.5);
        CHECK(m.at(768, 0) == 1.0);
        CHECK(m.at(769, 0) == 1.0);
        CHECK(m.at(770, 0) == 0.0);
        for (std::size_t r = 0; r < 771; ++r) CHECK(m.at(r, 1) == 0.0);
    }

    TEST_CASE("dimension mismatch names the post and field") {
        auto p = minimal_post("bad7");
        p.scene_logits.pop_back();
        try {
            assemble_visual(std::vector<PostRecord>{minimal_post("ok"), p});
            FAIL("expected an error");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("dimension mismatch post bad7 field scene_logits") != std::string::npos);
        }
        auto t = minimal_post("bad8");
        t.text_hidden.assign(10, 0.0);
        CHECK_THROWS_WITH_AS(assemble_textual(std::vector<PostRecord>{t}),
                             doctest::Contains("dimension mismatch post bad8 field text_hidden"), DataError);
    }

    TEST_CASE("assembly is column-local") {
        SyntheticGenerator gen(testing::small_synth(4, 12));
        auto posts = gen.posts();
        const auto a = assemble_visual(posts);
        const auto ta = assemble_textual(posts);
        std::vector<std::size_t> perm(posts.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        std::vector<PostRecord> shuffled;
        for (auto k : perm) shuffled.push_back(posts[k]);
        const auto b = assemble_visual(shuffled, 3);
        const auto tb = assemble_textual(shuffled, 3);
        for (std::size_t i = 0; i < posts.size(); ++i) {
            CHECK(std::ranges::equal(a.column(perm[i]), b.column(i)));
            CHECK(std::ranges::equal(ta.column(perm[i]), tb.column(i)));
        }
    }

    TEST_CASE("thread count does not change the matrices") {
        SyntheticGenerator gen(testing::small_synth(5, 40));
        const auto posts = gen.posts();
        CHECK(assemble_visual(posts, 1) == assemble_visual(posts, 4));
        CHECK(assemble_textual(posts, 1) == assemble_textual(posts, 4));
    }

    TEST_CASE("language flags") {
        using L = std::vector<std::string>;
        CHECK(language_flag_vector(L{"en", "nl"}, "nl") == LangFlags{1, 1, 0});
        CHECK(language_flag_vector(L{}, "it") == LangFlags{0, 0, 0});
        CHECK(language_flag_vector(L{"fr", "en", "zh"}, "zh") == LangFlags{1, 1, 1});
        CHECK(language_flag_vector(L{"de"}, "it") == LangFlags{0, 0, 1});
    }

    TEST_CASE("row names") {
        const auto v = feature_row_names(FeatureKind::visual);
        const auto t = feature_row_names(FeatureKind::textual);
        REQUIRE(v.size() == 982);
        REQUIRE(t.size() == 771);
        CHECK(v[512] == "face_count");
        CHECK(v[515] == "scene_0");
        CHECK(v[981] == "scene_attr_101");
        CHECK(t[770] == "lang_other");
    }
}
