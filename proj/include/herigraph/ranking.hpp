#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace herigraph {

// Result of a top-n query: the n largest values in descending order and the
// positions they came from, in the same order.
struct TopN {
    std::vector<double> values;
    std::vector<std::size_t> indices;
};

// The n largest entries of `l`. Ties go to the lower index, so exactly n
// positions are always selected. Throws DataError unless 1 <= n <= |l|.
TopN topn(std::span<const double> l, std::size_t n);

// |a ∩ b| / |a ∪ b| over index sets given as sorted or unsorted lists
// without duplicates. Throws DataError when both are empty.
double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace herigraph
