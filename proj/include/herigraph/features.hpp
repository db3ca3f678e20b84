#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herigraph/types.hpp"

namespace herigraph {

enum class FeatureKind { visual, textual };

// dim x K matrix stored column-major: column i holds post i.
struct FeatureMatrix {
    FeatureKind kind = FeatureKind::visual;
    std::size_t dim = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[col * dim + row]; }
    std::span<const double> column(std::size_t col) const {
        return {values.data() + col * dim, dim};
    }

    bool operator==(const FeatureMatrix&) const = default;
};

// n-hot soft activation filter: keeps the n largest entries of a simplex
// vector (ties to the lower index) and spreads the remaining mass evenly
// over the other d - n entries. Requires 1 <= n < d and a simplex input.
std::vector<double> nhot_soft_filter(std::span<const double> l, std::size_t n);

// [vis_hidden (512); face (3); filtered scene (365); filtered attributes (102)].
FeatureMatrix assemble_visual(std::span<const PostRecord> records, unsigned threads = 1);

// [text_hidden or zeros (768); language flags (3)].
FeatureMatrix assemble_textual(std::span<const PostRecord> records, unsigned threads = 1);

// (any English, any local_lang, any other) over per-sentence ISO-639-1 codes.
LangFlags language_flag_vector(std::span<const std::string> sentence_langs,
                               std::string_view local_lang);

// Row labels used as the first CSV column of exported matrices.
std::vector<std::string> feature_row_names(FeatureKind kind);

}  // namespace herigraph
