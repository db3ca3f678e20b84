#include "herigraph/io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <system_error>

#include <json.hpp>
#include <openssl/evp.h>

#include "herigraph/error.hpp"
#include "herigraph/text.hpp"

namespace herigraph {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw Error("schema", "SHA-256 unavailable");
        }
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(std::string_view bytes) { EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()); }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md.data(), &len);
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out += digits[md[i] >> 4];
            out += digits[md[i] & 15];
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) throw IoError("schema", "cannot read " + path.string());
    return in;
}

[[noreturn]] void bad_line(const fs::path& path, std::size_t line, const std::string& what) {
    throw DataError("schema", path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> header_ids(const fs::path& path, const std::string& line,
                                    std::string_view first) {
    const auto f = split_csv(line);
    if (f.empty() || f[0] != first) bad_line(path, 1, "expected header starting with " + std::string(first));
    return {f.begin() + 1, f.end()};
}

double cell(const fs::path& path, std::size_t line, std::string_view s) {
    const auto v = parse_double(s);
    if (!v) bad_line(path, line, "unparsable number '" + std::string(s) + "'");
    return *v;
}

void write_id_header(ByteSink& out, std::string_view first, std::span<const std::string> ids) {
    std::string line(first);
    for (const auto& id : ids) {
        line += ',';
        line += id;
    }
    line += '\n';
    out.write(line);
}

// One CSV row from a column-major matrix: row r of a dim x K block.
void write_matrix_row(ByteSink& out, std::string_view name, const std::vector<double>& values,
                      std::size_t dim, std::size_t r, std::size_t cols) {
    std::string line(name);
    line.reserve(cols * 24);
    for (std::size_t c = 0; c < cols; ++c) {
        line += ',';
        append_double(line, values[c * dim + r]);
    }
    line += '\n';
    out.write(line);
}

ojson layer_json(const LayerStats& s) {
    ojson j;
    j["nodes"] = s.node_count;
    j["edges"] = s.edge_count;
    j["isolated_nodes"] = s.isolated_count;
    j["components"] = s.component_count;
    j["largest_cc_size"] = s.largest_cc_size;
    j["largest_cc_diameter"] = s.largest_cc_diameter;
    j["density"] = s.density;
    j["weight_min"] = s.weight_min;
    j["weight_max"] = s.weight_max;
    j["distinct_weights"] = s.distinct_weights;
    j["degree_rank_size"] = s.degree_rank_size;
    return j;
}

std::vector<std::string> label_row_names() {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < kValueClasses; ++c) names.push_back("hv_" + std::to_string(c));
    names.insert(names.end(), {"hv_confidence", "hv_agreement"});
    for (std::size_t c = 0; c < kAttributeClasses; ++c) names.push_back("ha_" + std::to_string(c));
    names.insert(names.end(), {"ha_confidence", "ha_agreement", "hv_labeled", "ha_labeled"});
    return names;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes);
    return h.hex();
}

std::string sha256_file(const fs::path& path) {
    auto in = open_input(path);
    Sha256 h;
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        h.update({buf.data(), static_cast<std::size_t>(in.gcount())});
    }
    return h.hex();
}

void write_post_order(ByteSink& out, std::span<const std::string> post_ids) {
    out.write("index,post_id\n");
    std::string line;
    for (std::size_t i = 0; i < post_ids.size(); ++i) {
        line = std::to_string(i) + ',' + post_ids[i] + '\n';
        out.write(line);
    }
}

void write_feature_csv(ByteSink& out, const FeatureMatrix& m, std::span<const std::string> post_ids) {
    if (post_ids.size() != m.cols) throw DataError("schema", "post order and feature matrix disagree on K");
    write_id_header(out, "feature", post_ids);
    const auto names = feature_row_names(m.kind);
    for (std::size_t r = 0; r < m.dim; ++r) write_matrix_row(out, names[r], m.values, m.dim, r, m.cols);
}

std::size_t label_row_count() { return label_row_names().size(); }

void write_labels_csv(ByteSink& out, const LabelBundle& labels, std::span<const std::string> post_ids) {
    if (post_ids.size() != labels.posts) throw DataError("schema", "post order and labels disagree on K");
    const std::size_t K = labels.posts;
    const auto names = label_row_names();
    write_id_header(out, "label", post_ids);
    std::size_t row = 0;
    for (std::size_t c = 0; c < kValueClasses; ++c) write_matrix_row(out, names[row++], labels.y_hv, kValueClasses, c, K);
    for (std::size_t c = 0; c < 2; ++c) write_matrix_row(out, names[row++], labels.k_hv, 2, c, K);
    for (std::size_t c = 0; c < kAttributeClasses; ++c) write_matrix_row(out, names[row++], labels.y_ha, kAttributeClasses, c, K);
    for (std::size_t c = 0; c < 2; ++c) write_matrix_row(out, names[row++], labels.k_ha, 2, c, K);
    for (const auto* mask : {&labels.hv_labeled, &labels.ha_labeled}) {
        std::string line = names[row++];
        for (auto b : *mask) line += b ? ",1" : ",0";
        line += '\n';
        out.write(line);
    }
}

void write_layers_csv(ByteSink& out, const MultiGraph& graph) {
    out.write("layer,row,col,weight\n");
    std::string buf;
    for (Layer l : kLayers) {
        const std::string prefix = std::string(layer_name(l)) + ',';
        for (const auto& e : graph.layer(l).entries()) {
            buf += prefix;
            buf += std::to_string(e.row);
            buf += ',';
            buf += std::to_string(e.col);
            buf += ',';
            append_double(buf, e.weight);
            buf += '\n';
            if (buf.size() > (1 << 20)) {
                out.write(buf);
                buf.clear();
            }
        }
    }
    out.write(buf);
}

void write_composed_edgelist(ByteSink& out, const MultiGraph& graph,
                             std::span<const std::string> post_ids) {
    if (post_ids.size() != graph.posts) throw DataError("schema", "post order and graph disagree on K");
    std::string buf;
    for (const auto& e : graph.composed.entries()) {
        buf += post_ids[e.row];
        buf += ' ';
        buf += post_ids[e.col];
        buf += '\n';
        if (buf.size() > (1 << 20)) {
            out.write(buf);
            buf.clear();
        }
    }
    out.write(buf);
}

void write_rank_size_csv(ByteSink& out, const StatsReport& report) {
    out.write("series,rank,size\n");
    auto series = [&](std::string_view name, const std::vector<std::size_t>& v) {
        std::string buf;
        for (std::size_t i = 0; i < v.size(); ++i) {
            buf += name;
            buf += ',' + std::to_string(i + 1) + ',' + std::to_string(v[i]) + '\n';
        }
        out.write(buf);
    };
    for (Layer l : kLayers) {
        series(std::string(layer_name(l)) + "_degree", report.layers[static_cast<std::size_t>(l)].degree_rank_size);
    }
    series("composed_degree", report.composed.degree_rank_size);
    series("posts_per_node", report.network.posts_per_node_rank_size);
}

std::string stats_to_json(const StatsReport& r) {
    ojson j;
    j["posts"] = r.posts;
    ojson layers;
    for (Layer l : kLayers) layers[std::string(layer_name(l))] = layer_json(r.layers[static_cast<std::size_t>(l)]);
    j["layers"] = std::move(layers);
    j["composed"] = layer_json(r.composed);
    j["social_nodes"] = {{"thresholded", r.social_nodes_thresholded},
                         {"unthresholded", r.diagnostics.social_nodes_unthresholded}};
    j["groupless_users"] = {{"total", r.diagnostics.groupless_users},
                            {"with_posts", r.diagnostics.groupless_users_with_posts}};

    const auto& n = r.network;
    ojson net;
    net["input_nodes"] = n.input_nodes;
    net["input_edges"] = n.input_edges;
    net["nodes"] = n.node_count;
    net["edges"] = n.edge_count;
    net["dropped_nodes"] = n.dropped_nodes;
    net["edges_over_cutoff"] = n.edges_over_cutoff;
    net["components"] = n.component_count;
    net["largest_cc_size"] = n.largest_cc_size;
    net["density"] = n.density;
    net["posts_per_node_rank_size"] = n.posts_per_node_rank_size;
    j["network"] = std::move(net);

    const auto& f = r.features;
    j["features"] = {{"posts_with_faces", f.posts_with_faces},
                     {"face_mean", f.face_mean},
                     {"face_stddev", f.face_stddev},
                     {"posts_with_text", f.posts_with_text},
                     {"lang_counts", {{"english", f.lang_counts[0]},
                                      {"local", f.lang_counts[1]},
                                      {"other", f.lang_counts[2]}}}};

    const auto& ls = r.labels;
    j["labels"] = {{"hv_labeled", ls.hv_labeled},
                   {"ha_labeled", ls.ha_labeled},
                   {"hv_histogram", ls.hv_histogram},
                   {"ha_histogram", ls.ha_histogram},
                   {"hv_sparse_topn", ls.hv_sparse_topn},
                   {"ha_sparse_topn", ls.ha_sparse_topn}};

    if (r.comparison) {
        auto block = [](const DistributionComparison& c) {
            ojson b{{"kl", c.kl}, {"chi2", c.chi2 ? ojson(*c.chi2) : ojson(nullptr)}};
            if (!c.chi2_note.empty()) b["chi2_note"] = c.chi2_note;
            return b;
        };
        j["comparison"] = {{"hv", block((*r.comparison)[0])}, {"ha", block((*r.comparison)[1])}};
    }
    if (!r.consistency.empty()) {
        ojson list = ojson::array();
        for (const auto& e : r.consistency) {
            list.push_back({{"name", e.name},
                            {"n", e.n},
                            {"compared", e.compared},
                            {"mean", e.value.mean},
                            {"stddev", e.value.stddev}});
        }
        j["consistency"] = std::move(list);
    }
    return j.dump(2) + "\n";
}

std::vector<std::string> read_post_order(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string_view>{"index", "post_id"}) {
        bad_line(path, 1, "expected header index,post_id");
    }
    std::vector<std::string> ids;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        const auto f = split_csv(line);
        if (f.size() != 2 || parse_uint(f[0]) != ids.size()) bad_line(path, n, "malformed post order row");
        ids.emplace_back(f[1]);
    }
    return ids;
}

std::pair<FeatureMatrix, std::vector<std::string>> read_feature_csv(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) bad_line(path, 1, "empty file");
    auto ids = header_ids(path, line, "feature");
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        const auto f = split_csv(line);
        if (f.size() != ids.size() + 1) bad_line(path, n, "row width differs from header");
        names.emplace_back(f[0]);
        auto& row = rows.emplace_back();
        row.reserve(ids.size());
        for (std::size_t c = 1; c < f.size(); ++c) row.push_back(cell(path, n, f[c]));
    }
    FeatureMatrix m;
    if (names == feature_row_names(FeatureKind::visual)) {
        m.kind = FeatureKind::visual;
    } else if (names == feature_row_names(FeatureKind::textual)) {
        m.kind = FeatureKind::textual;
    } else {
        throw DataError("schema", path.string() + ": row names match neither feature layout");
    }
    m.dim = rows.size();
    m.cols = ids.size();
    m.values.resize(m.dim * m.cols);
    for (std::size_t r = 0; r < m.dim; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) m.values[c * m.dim + r] = rows[r][c];
    }
    return {std::move(m), std::move(ids)};
}

std::pair<LabelBundle, std::vector<std::string>> read_labels_csv(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) bad_line(path, 1, "empty file");
    auto ids = header_ids(path, line, "label");
    const std::size_t K = ids.size();
    const auto names = label_row_names();
    LabelBundle b;
    b.posts = K;
    b.y_hv.resize(kValueClasses * K);
    b.k_hv.resize(2 * K);
    b.y_ha.resize(kAttributeClasses * K);
    b.k_ha.resize(2 * K);
    b.hv_labeled.resize(K);
    b.ha_labeled.resize(K);

    std::size_t row = 0;
    for (std::size_t n = 2; std::getline(in, line); ++n, ++row) {
        const auto f = split_csv(line);
        if (row >= names.size() || f[0] != names[row]) bad_line(path, n, "unexpected row name");
        if (f.size() != K + 1) bad_line(path, n, "row width differs from header");
        auto fill = [&](std::vector<double>& dst, std::size_t dim, std::size_t r) {
            for (std::size_t c = 0; c < K; ++c) dst[c * dim + r] = cell(path, n, f[c + 1]);
        };
        auto mask = [&](std::vector<std::uint8_t>& dst) {
            for (std::size_t c = 0; c < K; ++c) {
                if (f[c + 1] != "0" && f[c + 1] != "1") bad_line(path, n, "mask entries must be 0 or 1");
                dst[c] = f[c + 1] == "1";
            }
        };
        std::size_t r = row;
        if (r < kValueClasses) { fill(b.y_hv, kValueClasses, r); continue; }
        r -= kValueClasses;
        if (r < 2) { fill(b.k_hv, 2, r); continue; }
        r -= 2;
        if (r < kAttributeClasses) { fill(b.y_ha, kAttributeClasses, r); continue; }
        r -= kAttributeClasses;
        if (r < 2) { fill(b.k_ha, 2, r); continue; }
        r -= 2;
        mask(r == 0 ? b.hv_labeled : b.ha_labeled);
    }
    if (row != names.size()) throw DataError("schema", path.string() + ": missing label rows");
    return {std::move(b), std::move(ids)};
}

MultiGraph read_layers_csv(const fs::path& path, std::size_t posts) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != "layer,row,col,weight") {
        bad_line(path, 1, "expected header layer,row,col,weight");
    }
    std::array<std::vector<CooEntry>, 3> triples;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        const auto f = split_csv(line);
        if (f.size() != 4) bad_line(path, n, "expected 4 fields");
        std::size_t layer = 3;
        for (Layer l : kLayers) {
            if (f[0] == layer_name(l)) layer = static_cast<std::size_t>(l);
        }
        const auto r = parse_uint(f[1]), c = parse_uint(f[2]);
        if (layer == 3 || !r || !c || *r >= posts || *c >= posts || *r >= *c) {
            bad_line(path, n, "malformed layer entry");
        }
        triples[layer].push_back({static_cast<Index>(*r), static_cast<Index>(*c), cell(path, n, f[3])});
    }
    std::array<SparseSymMatrix, 3> layers;
    for (std::size_t k = 0; k < 3; ++k) layers[k] = SparseSymMatrix::from_triples(posts, std::move(triples[k]));
    return MultiGraph::from_projections(std::move(layers));
}

std::pair<std::vector<double>, std::vector<double>> read_label_histograms(const fs::path& stats_json) {
    auto in = open_input(stats_json);
    try {
        const auto j = nlohmann::json::parse(in);
        return {j.at("labels").at("hv_histogram").get<std::vector<double>>(),
                j.at("labels").at("ha_histogram").get<std::vector<double>>()};
    } catch (const nlohmann::json::exception& e) {
        throw DataError("stats", stats_json.string() + ": no label histograms (" + e.what() + ")");
    }
}

std::string Manifest::to_json() const {
    ojson j;
    j["post_count"] = post_count;
    ojson list = ojson::array();
    for (const auto& f : files) list.push_back({{"name", f.name}, {"records", f.records}, {"sha256", f.sha256}});
    j["files"] = std::move(list);
    return j.dump(2) + "\n";
}

const ManifestEntry* Manifest::find(std::string_view name) const {
    for (const auto& f : files) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

class OutputWriter::File : public ByteSink {
public:
    explicit File(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw IoError("schema", "cannot write " + path.string());
    }

    void write(std::string_view bytes) override {
        out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        hash_.update(bytes);
    }

    std::string close() {
        out_.close();
        if (!out_) throw IoError("schema", "cannot write " + path_.string());
        return hash_.hex();
    }

private:
    fs::path path_;
    std::ofstream out_;
    Sha256 hash_;
};

void OutputWriter::FileDeleter::operator()(File* f) const { delete f; }

ByteSink& OutputWriter::as_sink(File& f) { return f; }

OutputWriter::OutputWriter(fs::path dir, std::size_t post_count) : dir_(std::move(dir)) {
    manifest_.post_count = post_count;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
        throw IoError("schema", "cannot create output directory " + dir_.string());
    }
}

OutputWriter::FilePtr OutputWriter::open(const std::string& name) {
    return FilePtr(new File(dir_ / name));
}

void OutputWriter::close(FilePtr file, const std::string& name, std::size_t records) {
    manifest_.files.push_back({name, records, file->close()});
}

const Manifest& OutputWriter::finish() {
    const std::string text = manifest_.to_json();
    const fs::path path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw IoError("schema", "cannot write " + path.string());
    return manifest_;
}

Manifest export_outputs(std::span<const std::string> post_ids, const FeatureMatrix& visual,
                        const FeatureMatrix& textual, const LabelBundle& labels,
                        const MultiGraph& graph, const StatsReport& stats, const fs::path& out_dir,
                        const OutputOptions& options) {
    const std::size_t K = post_ids.size();
    if (K == 0 || labels.posts == 0) throw DataError("schema", "empty dataset");
    if (visual.cols != K || textual.cols != K || labels.posts != K || graph.posts != K || stats.posts != K) {
        throw DataError("schema", "outputs disagree on the number of posts");
    }
    OutputWriter w(out_dir, K);
    w.add("post_order.csv", K, [&](ByteSink& s) { write_post_order(s, post_ids); });
    w.add("features_visual.csv", visual.dim, [&](ByteSink& s) { write_feature_csv(s, visual, post_ids); });
    w.add("features_textual.csv", textual.dim, [&](ByteSink& s) { write_feature_csv(s, textual, post_ids); });
    w.add("labels.csv", label_row_count(), [&](ByteSink& s) { write_labels_csv(s, labels, post_ids); });
    w.add("graph_layers.csv", graph.total_layer_entries(), [&](ByteSink& s) { write_layers_csv(s, graph); });
    w.add("stats.json", 1, [&](ByteSink& s) { s.write(stats_to_json(stats)); });
    if (options.rank_size_csv) {
        std::size_t rows = stats.composed.degree_rank_size.size() + stats.network.posts_per_node_rank_size.size();
        for (const auto& l : stats.layers) rows += l.degree_rank_size.size();
        w.add("rank_size.csv", rows, [&](ByteSink& s) { write_rank_size_csv(s, stats); });
    }
    if (options.composed_edgelist) {
        w.add("composed_edges.txt", graph.composed.nnz(),
              [&](ByteSink& s) { write_composed_edgelist(s, graph, post_ids); });
    }
    return w.finish();
}

}  // namespace herigraph
