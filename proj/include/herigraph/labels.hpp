#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "herigraph/ranking.hpp"
#include "herigraph/types.hpp"

namespace herigraph {

// Mean of two annotator outputs; both empty yields `classes` zeros.
// Throws DataError when exactly one is empty or the sizes differ.
std::vector<double> fuse_soft_labels(std::span<const double> ya, std::span<const double> yb,
                                     std::size_t classes);

// kappa0: summed mean confidence of the two annotators over their top-n
// predictions. kappa1: Jaccard overlap of the two top-n index sets.
struct LabelConfidence {
    double confidence = 0.0;
    double agreement = 0.0;
};

LabelConfidence label_confidence(std::span<const double> ya, std::span<const double> yb,
                                 std::size_t n);

// Soft pseudo-labels, their confidence/agreement and the filter masks.
// Matrices are column-major with one column per post.
struct LabelBundle {
    std::size_t posts = 0;
    std::vector<double> y_hv;  // kValueClasses x K
    std::vector<double> k_hv;  // 2 x K (confidence, agreement)
    std::vector<double> y_ha;  // kAttributeClasses x K
    std::vector<double> k_ha;  // 2 x K
    std::vector<std::uint8_t> hv_labeled;
    std::vector<std::uint8_t> ha_labeled;

    // Posts where an annotator output had fewer than n nonzero entries, so
    // part of its top-n set came from the tie order alone.
    std::size_t hv_sparse_topn = 0;
    std::size_t ha_sparse_topn = 0;

    std::span<const double> hv(std::size_t i) const {
        return {y_hv.data() + i * kValueClasses, kValueClasses};
    }
    std::span<const double> ha(std::size_t i) const {
        return {y_ha.data() + i * kAttributeClasses, kAttributeClasses};
    }

    bool operator==(const LabelBundle&) const = default;
};

LabelBundle build_label_bundle(std::span<const PostRecord> records, const GraphConfig& cfg,
                               unsigned threads = 1);

struct Consistency {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

// Mean and population standard deviation of pairwise Jaccard overlaps.
Consistency prediction_consistency(const std::vector<std::vector<std::size_t>>& sets_a,
                                   const std::vector<std::vector<std::size_t>>& sets_b);

}  // namespace herigraph
