#include "herigraph/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "herigraph/error.hpp"

namespace herigraph {

namespace {

bool coo_less(const CooEntry& x, const CooEntry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
}

}  // namespace

SparseSymMatrix SparseSymMatrix::from_triples(std::size_t dim, std::vector<CooEntry> triples) {
    std::vector<CooEntry> kept;
    kept.reserve(triples.size());
    for (CooEntry e : triples) {
        if (e.row >= dim || e.col >= dim) {
            throw DataError("graph", "matrix entry (" + std::to_string(e.row) + "," +
                                         std::to_string(e.col) + ") outside dim " +
                                         std::to_string(dim));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw DataError("graph", "matrix entry (" + std::to_string(e.row) + "," +
                                         std::to_string(e.col) + ") has invalid weight");
        }
        if (e.weight == 0.0) continue;
        if (e.row > e.col) std::swap(e.row, e.col);
        kept.push_back(e);
    }
    std::sort(kept.begin(), kept.end(), coo_less);
    auto dup = std::adjacent_find(kept.begin(), kept.end(), [](const CooEntry& a, const CooEntry& b) {
        return a.row == b.row && a.col == b.col;
    });
    if (dup != kept.end()) {
        throw DataError("graph", "duplicate matrix entry (" + std::to_string(dup->row) + "," +
                                     std::to_string(dup->col) + ")");
    }
    SparseSymMatrix m(dim);
    m.entries_ = std::move(kept);
    return m;
}

SparseSymMatrix SparseSymMatrix::from_sorted(std::size_t dim, std::vector<CooEntry> entries) {
#ifndef NDEBUG
    for (std::size_t i = 0; i < entries.size(); ++i) {
        assert(entries[i].row <= entries[i].col && entries[i].col < dim);
        assert(entries[i].weight > 0.0);
        assert(i == 0 || coo_less(entries[i - 1], entries[i]));
    }
#endif
    SparseSymMatrix m(dim);
    m.entries_ = std::move(entries);
    return m;
}

double SparseSymMatrix::at(Index r, Index c) const {
    if (r > c) std::swap(r, c);
    const CooEntry key{r, c, 0.0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key, coo_less);
    if (it != entries_.end() && it->row == r && it->col == c) return it->weight;
    return 0.0;
}

SparseSymMatrix SparseSymMatrix::without_diagonal() const {
    SparseSymMatrix m(dim_);
    m.entries_.reserve(entries_.size() - diagonal_count());
    for (const auto& e : entries_) {
        if (e.row != e.col) m.entries_.push_back(e);
    }
    return m;
}

std::size_t SparseSymMatrix::diagonal_count() const {
    return static_cast<std::size_t>(std::count_if(
        entries_.begin(), entries_.end(), [](const CooEntry& e) { return e.row == e.col; }));
}

std::vector<std::size_t> IndicatorMatrix::row_counts() const {
    std::vector<std::size_t> counts(rows, 0);
    for (Index r : assignment) ++counts[r];
    return counts;
}

std::vector<std::vector<Index>> IndicatorMatrix::members() const {
    std::vector<std::vector<Index>> out(rows);
    for (Index c = 0; c < assignment.size(); ++c) out[assignment[c]].push_back(c);
    return out;
}

Adjacency::Adjacency(const SparseSymMatrix& m) : offsets_(m.dim() + 1, 0) {
    for (const auto& e : m.entries()) {
        if (e.row == e.col) continue;
        ++offsets_[e.row + 1];
        ++offsets_[e.col + 1];
    }
    for (std::size_t v = 0; v < m.dim(); ++v) offsets_[v + 1] += offsets_[v];
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Entries are sorted by (row, col), so each node's list comes out sorted:
    // lower neighbours arrive as `col` of earlier rows, higher ones as `col`
    // of this row.
    for (const auto& e : m.entries()) {
        if (e.row == e.col) continue;
        neighbors_[fill[e.row]++] = e.col;
        neighbors_[fill[e.col]++] = e.row;
    }
}

}  // namespace herigraph
