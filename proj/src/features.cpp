#include "herigraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herigraph/error.hpp"
#include "herigraph/parallel.hpp"
#include "herigraph/ranking.hpp"

namespace herigraph {

namespace {

void require_dim(const PostRecord& r, std::string_view field, std::span<const double> v,
                 std::size_t expected) {
    if (v.size() != expected) {
        throw DataError("features", "dimension mismatch post " + r.post_id + " field " +
                                        std::string(field) + ": expected " +
                                        std::to_string(expected) + ", got " +
                                        std::to_string(v.size()));
    }
}

void write_filtered(const PostRecord& r, std::string_view field, std::span<const double> l,
                    std::size_t n, double* out) {
    try {
        const auto filtered = nhot_soft_filter(l, n);
        std::copy(filtered.begin(), filtered.end(), out);
    } catch (const DataError& e) {
        throw DataError("features", "post " + r.post_id + " field " + std::string(field) + ": " +
                                        e.what());
    }
}

}  // namespace

std::vector<double> nhot_soft_filter(std::span<const double> l, std::size_t n) {
    const std::size_t d = l.size();
    if (n < 1 || n >= d) {
        throw DataError("features", "soft filter needs 1 <= n < d, got n=" + std::to_string(n) +
                                        " d=" + std::to_string(d));
    }
    double sum = 0.0;
    for (double x : l) {
        if (!(x >= 0.0)) throw DataError("features", "soft filter input has a negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw DataError("features", "soft filter input is not a simplex (sum " +
                                        std::to_string(sum) + ")");
    }

    const TopN top = topn(l, n);
    double kept = 0.0;
    for (double v : top.values) kept += v;
    // Rounding can push kept a hair above 1; the residual stays non-negative.
    const double residual = std::max(0.0, (1.0 - kept) / static_cast<double>(d - n));

    std::vector<double> out(d, residual);
    for (std::size_t i : top.indices) out[i] = l[i];
    return out;
}

FeatureMatrix assemble_visual(std::span<const PostRecord> records, unsigned threads) {
    FeatureMatrix m{FeatureKind::visual, kVisualDim, records.size(), {}};
    m.values.resize(kVisualDim * records.size());
    parallel_for(records.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const PostRecord& r = records[i];
            require_dim(r, "vis_hidden", r.vis_hidden, kVisHiddenDim);
            require_dim(r, "scene_logits", r.scene_logits, kSceneDim);
            require_dim(r, "scene_attr_logits", r.scene_attr_logits, kSceneAttrDim);

            double* col = m.values.data() + i * kVisualDim;
            col = std::copy(r.vis_hidden.begin(), r.vis_hidden.end(), col);
            *col++ = static_cast<double>(r.face_vec.count);
            *col++ = r.face_vec.confidence;
            *col++ = r.face_vec.area_ratio;
            write_filtered(r, "scene_logits", r.scene_logits, kSceneTopN, col);
            col += kSceneDim;
            write_filtered(r, "scene_attr_logits", r.scene_attr_logits, kSceneAttrTopN, col);
        }
    });
    return m;
}

FeatureMatrix assemble_textual(std::span<const PostRecord> records, unsigned threads) {
    FeatureMatrix m{FeatureKind::textual, kTextualDim, records.size(), {}};
    m.values.assign(kTextualDim * records.size(), 0.0);
    parallel_for(records.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const PostRecord& r = records[i];
            double* col = m.values.data() + i * kTextualDim;
            if (!r.text_hidden.empty()) {
                require_dim(r, "text_hidden", r.text_hidden, kTextHiddenDim);
                std::copy(r.text_hidden.begin(), r.text_hidden.end(), col);
            }
            for (std::size_t k = 0; k < kLangDim; ++k) {
                col[kTextHiddenDim + k] = static_cast<double>(r.lang_flags[k]);
            }
        }
    });
    return m;
}

LangFlags language_flag_vector(std::span<const std::string> sentence_langs,
                               std::string_view local_lang) {
    LangFlags flags{0, 0, 0};
    for (const auto& code : sentence_langs) {
        if (code == "en") {
            flags[0] = 1;
        }
        if (code == local_lang) {
            flags[1] = 1;
        }
        if (code != "en" && code != local_lang) {
            flags[2] = 1;
        }
    }
    return flags;
}

std::vector<std::string> feature_row_names(FeatureKind kind) {
    std::vector<std::string> names;
    auto block = [&](std::string_view prefix, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
    };
    if (kind == FeatureKind::visual) {
        names.reserve(kVisualDim);
        block("vis_hidden_", kVisHiddenDim);
        names.insert(names.end(), {"face_count", "face_confidence", "face_area_ratio"});
        block("scene_", kSceneDim);
        block("scene_attr_", kSceneAttrDim);
    } else {
        names.reserve(kTextualDim);
        block("text_hidden_", kTextHiddenDim);
        names.insert(names.end(), {"lang_english", "lang_local", "lang_other"});
    }
    return names;
}

}  // namespace herigraph
