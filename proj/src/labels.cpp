#include "herigraph/labels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herigraph/error.hpp"
#include "herigraph/parallel.hpp"

namespace herigraph {

namespace {

std::size_t nonzero_count(std::span<const double> v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

struct FusedColumn {
    LabelConfidence kappa;
    bool sparse = false;
};

// Writes the fused label for one post into `y` and returns its kappa pair.
// Absent annotator outputs leave `y` zero and kappa (0, 0).
FusedColumn fuse_column(const PostRecord& r, std::span<const double> ya, std::span<const double> yb,
                        std::size_t classes, std::size_t n, double* y) {
    std::vector<double> fused;
    try {
        fused = fuse_soft_labels(ya, yb, classes);
    } catch (const DataError& e) {
        throw DataError("labels", "post " + r.post_id + ": " + e.what());
    }
    std::copy(fused.begin(), fused.end(), y);
    if (ya.empty()) return {};
    FusedColumn out;
    out.kappa = label_confidence(ya, yb, n);
    out.sparse = nonzero_count(ya) < n || nonzero_count(yb) < n;
    return out;
}

}  // namespace

std::vector<double> fuse_soft_labels(std::span<const double> ya, std::span<const double> yb,
                                     std::size_t classes) {
    if (ya.empty() != yb.empty()) {
        throw DataError("labels", "annotator pair incomplete: exactly one output is absent");
    }
    std::vector<double> out(classes, 0.0);
    if (ya.empty()) return out;
    if (ya.size() != classes || yb.size() != classes) {
        throw DataError("labels", "annotator outputs must have " + std::to_string(classes) +
                                      " classes, got " + std::to_string(ya.size()) + " and " +
                                      std::to_string(yb.size()));
    }
    for (std::size_t c = 0; c < classes; ++c) out[c] = (ya[c] + yb[c]) / 2.0;
    return out;
}

LabelConfidence label_confidence(std::span<const double> ya, std::span<const double> yb,
                                 std::size_t n) {
    if (ya.size() != yb.size()) {
        throw DataError("labels", "annotator outputs differ in length");
    }
    const TopN ta = topn(ya, n);
    const TopN tb = topn(yb, n);
    LabelConfidence k;
    for (std::size_t i = 0; i < n; ++i) k.confidence += (ta.values[i] + tb.values[i]) / 2.0;
    k.agreement = jaccard(ta.indices, tb.indices);
    return k;
}

LabelBundle build_label_bundle(std::span<const PostRecord> records, const GraphConfig& cfg,
                               unsigned threads) {
    cfg.validate();
    const std::size_t K = records.size();
    LabelBundle b;
    b.posts = K;
    b.y_hv.assign(kValueClasses * K, 0.0);
    b.k_hv.assign(2 * K, 0.0);
    b.y_ha.assign(kAttributeClasses * K, 0.0);
    b.k_ha.assign(2 * K, 0.0);
    b.hv_labeled.assign(K, 0);
    b.ha_labeled.assign(K, 0);
    std::vector<std::uint8_t> hv_sparse(K, 0);
    std::vector<std::uint8_t> ha_sparse(K, 0);

    parallel_for(K, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const PostRecord& r = records[i];
            if (r.ha_logits_a.empty() || r.ha_logits_b.empty()) {
                throw DataError("labels", "post " + r.post_id + " lacks attribute annotator outputs");
            }
            if (r.has_text == r.hv_logits_a.empty()) {
                throw DataError("labels", "post " + r.post_id +
                                              ": value annotator outputs must be present iff the post has text");
            }
            const auto hv = fuse_column(r, r.hv_logits_a, r.hv_logits_b, kValueClasses, cfg.hv_top_n,
                                        b.y_hv.data() + i * kValueClasses);
            const auto ha = fuse_column(r, r.ha_logits_a, r.ha_logits_b, kAttributeClasses,
                                        cfg.ha_top_n, b.y_ha.data() + i * kAttributeClasses);
            b.k_hv[2 * i] = hv.kappa.confidence;
            b.k_hv[2 * i + 1] = hv.kappa.agreement;
            b.k_ha[2 * i] = ha.kappa.confidence;
            b.k_ha[2 * i + 1] = ha.kappa.agreement;
            b.hv_labeled[i] = r.has_text && hv.kappa.confidence > cfg.hv_conf_min &&
                              hv.kappa.agreement > cfg.hv_agree_min;
            b.ha_labeled[i] =
                ha.kappa.confidence > cfg.ha_conf_min && ha.kappa.agreement >= cfg.ha_agree_min;
            hv_sparse[i] = hv.sparse;
            ha_sparse[i] = ha.sparse;
        }
    });
    b.hv_sparse_topn = static_cast<std::size_t>(std::count(hv_sparse.begin(), hv_sparse.end(), 1));
    b.ha_sparse_topn = static_cast<std::size_t>(std::count(ha_sparse.begin(), ha_sparse.end(), 1));
    return b;
}

Consistency prediction_consistency(const std::vector<std::vector<std::size_t>>& sets_a,
                                   const std::vector<std::vector<std::size_t>>& sets_b) {
    if (sets_a.size() != sets_b.size()) {
        throw DataError("labels", "consistency inputs differ in length (" +
                                      std::to_string(sets_a.size()) + " vs " +
                                      std::to_string(sets_b.size()) + ")");
    }
    if (sets_a.empty()) return {};
    std::vector<double> iou(sets_a.size());
    for (std::size_t i = 0; i < sets_a.size(); ++i) iou[i] = jaccard(sets_a[i], sets_b[i]);
    double mean = 0.0;
    for (double x : iou) mean += x;
    mean /= static_cast<double>(iou.size());
    double var = 0.0;
    for (double x : iou) var += (x - mean) * (x - mean);
    var /= static_cast<double>(iou.size());
    return {mean, std::sqrt(var)};
}

}  // namespace herigraph
