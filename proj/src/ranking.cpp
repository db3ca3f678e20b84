#include "herigraph/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "herigraph/error.hpp"

namespace herigraph {

TopN topn(std::span<const double> l, std::size_t n) {
    if (n < 1 || n > l.size()) {
        throw DataError("labels", "top-n size " + std::to_string(n) + " outside [1, " +
                                      std::to_string(l.size()) + "]");
    }
    std::vector<std::size_t> order(l.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return l[a] != l[b] ? l[a] > l[b] : a < b;
                      });
    order.resize(n);
    TopN out;
    out.values.reserve(n);
    for (std::size_t i : order) out.values.push_back(l[i]);
    out.indices = std::move(order);
    return out;
}

double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.empty() && b.empty()) {
        throw DataError("labels", "jaccard of two empty sets is undefined");
    }
    std::vector<std::size_t> sa(a.begin(), a.end());
    std::vector<std::size_t> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::size_t inter = 0;
    for (std::size_t i = 0, j = 0; i < sa.size() && j < sb.size();) {
        if (sa[i] == sb[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (sa[i] < sb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace herigraph
