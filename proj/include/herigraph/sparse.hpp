#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace herigraph {

using Index = std::uint32_t;

struct CooEntry {
    Index row = 0;
    Index col = 0;
    double weight = 0.0;

    bool operator==(const CooEntry&) const = default;
};

// Symmetric weighted matrix kept as its upper triangle (row <= col) in
// coordinate form, sorted by (row, col). Entries are unique and strictly
// positive; an absent entry reads as zero.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    explicit SparseSymMatrix(std::size_t dim) : dim_(dim) {}

    // Canonicalises arbitrary triples: swaps (r, c) into row <= col, drops
    // zero weights, sorts. Throws DataError on out-of-range indices,
    // negative or non-finite weights, and duplicated coordinates.
    static SparseSymMatrix from_triples(std::size_t dim, std::vector<CooEntry> triples);

    // Adopts entries that are already canonical (sorted, unique, row <= col,
    // weight > 0). Checked only in debug builds.
    static SparseSymMatrix from_sorted(std::size_t dim, std::vector<CooEntry> entries);

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return entries_.size(); }
    std::span<const CooEntry> entries() const { return entries_; }

    double at(Index r, Index c) const;

    // Copy without the diagonal entries.
    SparseSymMatrix without_diagonal() const;
    std::size_t diagonal_count() const;

    bool operator==(const SparseSymMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<CooEntry> entries_;
};

// One-hot embedding matrix (rows x cols) stored as the active row of each
// column.
struct IndicatorMatrix {
    std::size_t rows = 0;
    std::vector<Index> assignment;  // one entry per column

    std::size_t cols() const { return assignment.size(); }
    // Number of columns assigned to each row.
    std::vector<std::size_t> row_counts() const;
    // Columns of each row, ascending.
    std::vector<std::vector<Index>> members() const;
};

// Unweighted CSR view of the off-diagonal support of a symmetric matrix.
class Adjacency {
public:
    explicit Adjacency(const SparseSymMatrix& m);

    std::size_t node_count() const { return offsets_.size() - 1; }
    std::size_t edge_count() const { return neighbors_.size() / 2; }
    std::span<const Index> neighbors(Index v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Index> neighbors_;
};

}  // namespace herigraph
