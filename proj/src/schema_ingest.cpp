#include "herigraph/schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "herigraph/error.hpp"
#include "herigraph/parallel.hpp"
#include "herigraph/text.hpp"

namespace herigraph {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string describe(const std::string& file, std::size_t line, const std::string& message) {
    if (line == 0) return file + ": " + message;
    return file + ":" + std::to_string(line) + ": " + message;
}

// Collects violations, or throws on the first one in fail-fast mode.
class Sink {
public:
    explicit Sink(bool fail_fast) : fail_fast_(fail_fast) {}

    void add(const std::string& file, std::size_t line, std::string message) {
        if (fail_fast_) throw DataError("schema", describe(file, line, message));
        violations.push_back({file, line, std::move(message)});
    }

    std::vector<Violation> violations;

private:
    bool fail_fast_;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) throw IoError("schema", "cannot read " + path.string());
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("schema", "cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("schema", "cannot write " + path.string());
}

[[noreturn]] void bad_field(const std::string& id, std::string_view field, std::string_view what) {
    throw DataError("schema", "post " + (id.empty() ? std::string("?") : id) + " field " +
                                  std::string(field) + ": " + std::string(what));
}

const json* find_field(const json& obj, const char* name) {
    auto it = obj.find(name);
    return it == obj.end() ? nullptr : &*it;
}

const json& require_field(const json& obj, const char* name, const std::string& id) {
    const json* v = find_field(obj, name);
    if (!v) bad_field(id, name, "missing");
    return *v;
}

std::string read_id(const json& obj, const char* name, const std::string& id) {
    const json& v = require_field(obj, name, id);
    if (!v.is_string()) bad_field(id, name, "expected a string");
    auto s = v.get<std::string>();
    if (!valid_identifier(s)) bad_field(id, name, "identifier is empty or holds whitespace, comma or quote");
    return s;
}

std::vector<double> read_numbers(const json& v, const char* name, const std::string& id) {
    if (!v.is_array()) bad_field(id, name, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) bad_field(id, name, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

// Required vector; may still be empty, which check_post reports.
std::vector<double> read_vector(const json& obj, const char* name, const std::string& id) {
    return read_numbers(require_field(obj, name, id), name, id);
}

// Absent, null and [] all mean "no value".
std::vector<double> read_optional_vector(const json& obj, const char* name, const std::string& id) {
    const json* v = find_field(obj, name);
    if (!v || v->is_null()) return {};
    return read_numbers(*v, name, id);
}

void check_vector(std::vector<std::string>& out, const PostRecord& r, std::string_view field,
                  const std::vector<double>& v, std::size_t dim, bool simplex) {
    const std::string where = "post " + r.post_id + " field " + std::string(field);
    if (v.size() != dim) {
        out.push_back("dimension mismatch " + where + ": expected " + std::to_string(dim) +
                      ", got " + std::to_string(v.size()));
        return;
    }
    double sum = 0.0;
    bool finite = true, negative = false;
    for (double x : v) {
        finite = finite && std::isfinite(x);
        negative = negative || x < 0.0;
        sum += x;
    }
    if (!finite) {
        out.push_back("non-finite value " + where);
        return;
    }
    if (!simplex) return;
    if (negative) out.push_back("negative entry " + where);
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        out.push_back("simplex violation " + where + ": sum " + format_double(sum));
    }
}

struct ParsedLine {
    std::size_t line = 0;
    std::string text;
    PostRecord record;
    std::vector<std::string> problems;
};

std::vector<PostRecord> read_posts(const fs::path& path, unsigned threads, Sink& sink) {
    auto in = open_input(path);
    const std::string file = path.string();
    std::vector<ParsedLine> lines;
    std::string text;
    for (std::size_t n = 1; std::getline(in, text); ++n) {
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back({n, std::move(text), {}, {}});
    }
    if (in.bad()) throw IoError("schema", "cannot read " + file);

    parallel_for(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto& p = lines[i];
            try {
                p.record = parse_post_line(p.text);
                p.problems = check_post(p.record);
            } catch (const DataError& e) {
                p.problems = {e.what()};
            }
            std::string().swap(p.text);
        }
    });

    std::vector<PostRecord> records;
    records.reserve(lines.size());
    std::unordered_set<std::string> seen;
    for (auto& p : lines) {
        for (auto& msg : p.problems) sink.add(file, p.line, std::move(msg));
        if (!p.problems.empty()) continue;
        if (!seen.insert(p.record.post_id).second) {
            sink.add(file, p.line, "duplicate post_id " + p.record.post_id);
            continue;
        }
        records.push_back(std::move(p.record));
    }
    return records;
}

UserRelations read_relations(const fs::path& path, Sink& sink) {
    static const json kEmpty = json::object();
    auto in = open_input(path);
    const std::string file = path.string();
    UserRelations rel;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        sink.add(file, 0, std::string("malformed JSON: ") + e.what());
        return rel;
    }
    if (!doc.is_object() || !doc.contains("users") || !doc["users"].is_array()) {
        sink.add(file, 0, "expected an object with a \"users\" array");
        return rel;
    }
    for (const auto& u : doc["users"]) {
        if (!u.is_string() || !valid_identifier(u.get<std::string>())) {
            sink.add(file, 0, "invalid user_id " + u.dump());
            continue;
        }
        const auto id = u.get<std::string>();
        if (rel.find_user(id)) {
            sink.add(file, 0, "duplicate user_id " + id);
            continue;
        }
        rel.add_user(id);
    }

    if (const json* contacts = find_field(doc, "contacts"); contacts && !contacts->is_null()) {
        if (!contacts->is_array()) sink.add(file, 0, "\"contacts\" must be an array of pairs");
        const json& list = contacts->is_array() ? *contacts : kEmpty;
        std::size_t index = 0;
        for (const auto& pair : list) {
            const std::size_t at = index++;
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                sink.add(file, 0, "malformed contact at index " + std::to_string(at));
                continue;
            }
            const auto a = pair[0].get<std::string>(), b = pair[1].get<std::string>();
            const auto ia = rel.find_user(a), ib = rel.find_user(b);
            if (!ia || !ib) {
                sink.add(file, 0, "unknown contact endpoint " + (!ia ? a : b));
                continue;
            }
            if (*ia == *ib) {
                sink.add(file, 0, "self contact " + a);
                continue;
            }
            rel.add_contact(*ia, *ib);
        }
    }

    if (const json* groups = find_field(doc, "groups"); groups && !groups->is_null()) {
        if (!groups->is_object()) sink.add(file, 0, "\"groups\" must map user_id to group lists");
        const json& map = groups->is_object() ? *groups : kEmpty;
        for (const auto& [user, list] : map.items()) {
            const auto iu = rel.find_user(user);
            if (!iu) {
                sink.add(file, 0, "groups for unknown user " + user);
                continue;
            }
            if (!list.is_array()) {
                sink.add(file, 0, "group list of user " + user + " is not an array");
                continue;
            }
            for (const auto& g : list) {
                if (!g.is_string() || g.template get<std::string>().empty()) {
                    sink.add(file, 0, "invalid group id for user " + user);
                    continue;
                }
                rel.add_group(*iu, g.template get<std::string>());
            }
        }
    }
    return rel;
}

bool read_header(std::ifstream& in, const std::string& file, std::string_view expected, Sink& sink) {
    std::string line;
    if (!std::getline(in, line)) {
        sink.add(file, 1, "missing header " + std::string(expected));
        return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) {
        sink.add(file, 1, "expected header " + std::string(expected));
        return false;
    }
    return true;
}

SpatialNetwork read_network(const fs::path& nodes_path, const fs::path& edges_path,
                            std::vector<std::string>& warnings, Sink& sink) {
    SpatialNetwork net;
    std::unordered_map<std::string, std::uint32_t> index;
    {
        auto in = open_input(nodes_path);
        const std::string file = nodes_path.string();
        if (read_header(in, file, "node_id,lat,lon", sink)) {
            std::string line;
            for (std::size_t n = 2; std::getline(in, line); ++n) {
                if (line.empty() || line == "\r") continue;
                const auto f = split_csv(line);
                if (f.size() != 3) {
                    sink.add(file, n, "expected 3 fields");
                    continue;
                }
                const std::string id(f[0]);
                const auto lat = parse_double(f[1]), lon = parse_double(f[2]);
                if (!valid_identifier(id)) {
                    sink.add(file, n, "invalid node_id");
                    continue;
                }
                if (!lat || !lon) {
                    sink.add(file, n, "unparsable coordinate node " + id);
                    continue;
                }
                if (!(*lat >= -90.0 && *lat <= 90.0)) {
                    sink.add(file, n, "latitude out of range node " + id);
                    continue;
                }
                if (!(*lon >= -180.0 && *lon <= 180.0)) {
                    sink.add(file, n, "longitude out of range node " + id);
                    continue;
                }
                if (!index.try_emplace(id, static_cast<std::uint32_t>(net.nodes.size())).second) {
                    sink.add(file, n, "duplicate node_id " + id);
                    continue;
                }
                net.nodes.push_back({id, {*lat, *lon}});
            }
        }
        if (net.nodes.empty()) sink.add(file, 0, "network has no nodes");
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, double> fastest;
    {
        auto in = open_input(edges_path);
        const std::string file = edges_path.string();
        if (read_header(in, file, "src,dst,travel_min", sink)) {
            std::string line;
            for (std::size_t n = 2; std::getline(in, line); ++n) {
                if (line.empty() || line == "\r") continue;
                const auto f = split_csv(line);
                if (f.size() != 3) {
                    sink.add(file, n, "expected 3 fields");
                    continue;
                }
                const std::string src(f[0]), dst(f[1]);
                auto ia = index.find(src), ib = index.find(dst);
                if (ia == index.end() || ib == index.end()) {
                    sink.add(file, n, "unknown edge endpoint " + (ia == index.end() ? src : dst));
                    continue;
                }
                const auto w = parse_double(f[2]);
                if (!w) {
                    sink.add(file, n, "unparsable travel time");
                    continue;
                }
                if (!std::isfinite(*w)) {
                    sink.add(file, n, "non-finite travel time");
                    continue;
                }
                if (*w < 0.0) {
                    sink.add(file, n, "negative travel time");
                    continue;
                }
                if (ia->second == ib->second) {
                    warnings.push_back(describe(file, n, "self-loop at node " + src + " dropped"));
                    continue;
                }
                auto key = std::minmax(ia->second, ib->second);
                auto [it, inserted] = fastest.try_emplace({key.first, key.second}, *w);
                if (!inserted) it->second = std::min(it->second, *w);
            }
        }
    }
    net.edges.reserve(fastest.size());
    for (const auto& [key, w] : fastest) net.edges.push_back({key.first, key.second, w});
    return net;
}

// Posts whose user is missing from the relations file join with no
// contacts or groups.
void register_post_users(const std::vector<PostRecord>& posts, UserRelations& rel,
                         std::vector<std::string>& warnings) {
    for (const auto& p : posts) {
        if (rel.find_user(p.user_id)) continue;
        rel.add_user(p.user_id);
        warnings.push_back("user " + p.user_id + " of post " + p.post_id +
                           " is not in the relations file; registered without contacts or groups");
    }
    rel.finalize();
}

}  // namespace

std::vector<std::string> check_post(const PostRecord& r) {
    std::vector<std::string> out;
    const std::string post = "post " + r.post_id;
    if (!valid_identifier(r.post_id)) out.push_back("invalid post_id " + r.post_id);
    if (!valid_identifier(r.user_id)) out.push_back("invalid user_id " + post);
    if (!(r.geo.lat >= -90.0 && r.geo.lat <= 90.0)) out.push_back("latitude out of range " + post);
    if (!(r.geo.lon >= -180.0 && r.geo.lon <= 180.0)) out.push_back("longitude out of range " + post);

    const auto& f = r.face_vec;
    if (f.count < 0) out.push_back("negative face count " + post);
    if (!(f.confidence >= 0.0 && f.confidence <= 1.0)) out.push_back("face confidence out of range " + post);
    if (!(f.area_ratio >= 0.0 && f.area_ratio <= 1.0)) out.push_back("face area_ratio out of range " + post);
    if (f.count == 0 && (f.confidence != 0.0 || f.area_ratio != 0.0)) {
        out.push_back("face values without faces " + post);
    }
    for (auto flag : r.lang_flags) {
        if (flag > 1) {
            out.push_back("language flag not binary " + post);
            break;
        }
    }

    check_vector(out, r, "vis_hidden", r.vis_hidden, kVisHiddenDim, false);
    check_vector(out, r, "scene_logits", r.scene_logits, kSceneDim, true);
    check_vector(out, r, "scene_attr_logits", r.scene_attr_logits, kSceneAttrDim, true);
    check_vector(out, r, "ha_logits_a", r.ha_logits_a, kAttributeClasses, true);
    check_vector(out, r, "ha_logits_b", r.ha_logits_b, kAttributeClasses, true);

    struct TextField {
        const char* name;
        const std::vector<double>* v;
        std::size_t dim;
        bool simplex;
    };
    const TextField text_fields[] = {
        {"text_hidden", &r.text_hidden, kTextHiddenDim, false},
        {"hv_logits_a", &r.hv_logits_a, kValueClasses, true},
        {"hv_logits_b", &r.hv_logits_b, kValueClasses, true},
    };
    for (const auto& t : text_fields) {
        if (r.has_text) {
            if (t.v->empty()) {
                out.push_back("missing text field " + post + " field " + t.name);
            } else {
                check_vector(out, r, t.name, *t.v, t.dim, t.simplex);
            }
        } else if (!t.v->empty()) {
            out.push_back("text field without text " + post + " field " + t.name);
        }
    }
    if (!r.has_text && (r.lang_flags[0] | r.lang_flags[1] | r.lang_flags[2]) != 0) {
        out.push_back("language flags without text " + post);
    }
    return out;
}

PostRecord parse_post_line(std::string_view line) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError("schema", std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw DataError("schema", "malformed post: expected a JSON object");

    PostRecord r;
    r.post_id = read_id(obj, "post_id", "");
    const std::string& id = r.post_id;
    r.user_id = read_id(obj, "user_id", id);

    const json& week = require_field(obj, "week_index", id);
    if (!week.is_number_integer()) bad_field(id, "week_index", "expected an integer");
    r.week_index = week.get<std::int64_t>();

    const json& geo = require_field(obj, "geo", id);
    if (!geo.is_array() || geo.size() != 2 || !geo[0].is_number() || !geo[1].is_number()) {
        bad_field(id, "geo", "expected [lat, lon]");
    }
    r.geo = {geo[0].get<double>(), geo[1].get<double>()};

    const json& has_text = require_field(obj, "has_text", id);
    if (!has_text.is_boolean()) bad_field(id, "has_text", "expected a boolean");
    r.has_text = has_text.get<bool>();

    const json& lang = require_field(obj, "lang_flags", id);
    if (!lang.is_array() || lang.size() != kLangDim) bad_field(id, "lang_flags", "expected three 0/1 flags");
    for (std::size_t k = 0; k < kLangDim; ++k) {
        if (!lang[k].is_number_integer()) bad_field(id, "lang_flags", "expected three 0/1 flags");
        const auto v = lang[k].get<std::int64_t>();
        if (v != 0 && v != 1) bad_field(id, "lang_flags", "expected three 0/1 flags");
        r.lang_flags[k] = static_cast<std::uint8_t>(v);
    }

    const json& face = require_field(obj, "face_vec", id);
    if (!face.is_array() || face.size() != kFaceDim || !face[0].is_number_integer() ||
        !face[1].is_number() || !face[2].is_number()) {
        bad_field(id, "face_vec", "expected [count, confidence, area_ratio]");
    }
    r.face_vec = {face[0].get<std::int64_t>(), face[1].get<double>(), face[2].get<double>()};

    r.vis_hidden = read_vector(obj, "vis_hidden", id);
    r.scene_logits = read_vector(obj, "scene_logits", id);
    r.scene_attr_logits = read_vector(obj, "scene_attr_logits", id);
    r.text_hidden = read_optional_vector(obj, "text_hidden", id);
    r.hv_logits_a = read_optional_vector(obj, "hv_logits_a", id);
    r.hv_logits_b = read_optional_vector(obj, "hv_logits_b", id);
    r.ha_logits_a = read_vector(obj, "ha_logits_a", id);
    r.ha_logits_b = read_vector(obj, "ha_logits_b", id);
    return r;
}

std::string post_to_ndjson(const PostRecord& r) {
    std::string s;
    s.reserve(32 * (r.vis_hidden.size() + r.scene_logits.size() + r.text_hidden.size() + 512));
    auto key = [&](std::string_view k) {
        s += s.empty() ? "{\"" : ",\"";
        s += k;
        s += "\":";
    };
    auto vec = [&](std::string_view k, const std::vector<double>& v) {
        key(k);
        s += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            append_double(s, v[i]);
        }
        s += ']';
    };
    key("post_id");
    s += json(r.post_id).dump();
    key("user_id");
    s += json(r.user_id).dump();
    key("week_index");
    s += std::to_string(r.week_index);
    key("geo");
    s += '[';
    append_double(s, r.geo.lat);
    s += ',';
    append_double(s, r.geo.lon);
    s += ']';
    key("has_text");
    s += r.has_text ? "true" : "false";
    key("lang_flags");
    s += '[' + std::to_string(r.lang_flags[0]) + ',' + std::to_string(r.lang_flags[1]) + ',' +
         std::to_string(r.lang_flags[2]) + ']';
    key("face_vec");
    s += '[' + std::to_string(r.face_vec.count) + ',';
    append_double(s, r.face_vec.confidence);
    s += ',';
    append_double(s, r.face_vec.area_ratio);
    s += ']';
    vec("vis_hidden", r.vis_hidden);
    vec("scene_logits", r.scene_logits);
    vec("scene_attr_logits", r.scene_attr_logits);
    vec("text_hidden", r.text_hidden);
    vec("hv_logits_a", r.hv_logits_a);
    vec("hv_logits_b", r.hv_logits_b);
    vec("ha_logits_a", r.ha_logits_a);
    vec("ha_logits_b", r.ha_logits_b);
    s += '}';
    return s;
}

std::vector<PostRecord> read_posts_file(const fs::path& path, unsigned threads) {
    Sink sink(true);
    return read_posts(path, threads, sink);
}

Dataset ingest_dataset(const DatasetPaths& paths, unsigned threads) {
    Sink sink(true);
    Dataset d;
    d.posts = read_posts(paths.posts, threads, sink);
    d.relations = read_relations(paths.relations, sink);
    d.network = read_network(paths.network_nodes, paths.network_edges, d.warnings, sink);
    register_post_users(d.posts, d.relations, d.warnings);
    return d;
}

ValidationReport validate_dataset(const DatasetPaths& paths, unsigned threads) {
    Sink sink(false);
    ValidationReport rep;
    const auto posts = read_posts(paths.posts, threads, sink);
    auto rel = read_relations(paths.relations, sink);
    const auto net = read_network(paths.network_nodes, paths.network_edges, rep.warnings, sink);
    register_post_users(posts, rel, rep.warnings);
    if (posts.empty()) rep.warnings.push_back(paths.posts.string() + ": no valid posts");
    rep.violations = std::move(sink.violations);
    rep.posts = posts.size();
    rep.users = rel.user_count();
    rep.nodes = net.nodes.size();
    rep.edges = net.edges.size();
    return rep;
}

void write_posts(const fs::path& path, std::span<const PostRecord> records) {
    auto out = open_output(path);
    for (const auto& r : records) out << post_to_ndjson(r) << '\n';
    finish_output(out, path);
}

void write_relations(const fs::path& path, const UserRelations& rel) {
    json doc;
    doc["users"] = rel.users();
    json contacts = json::array();
    for (const auto& [a, b] : rel.contacts()) contacts.push_back({rel.users()[a], rel.users()[b]});
    doc["contacts"] = std::move(contacts);
    json groups = json::object();
    for (std::uint32_t u = 0; u < rel.user_count(); ++u) {
        if (rel.groups_of(u).empty()) continue;
        json list = json::array();
        for (auto g : rel.groups_of(u)) list.push_back(rel.group_names()[g]);
        groups[rel.users()[u]] = std::move(list);
    }
    doc["groups"] = std::move(groups);
    auto out = open_output(path);
    out << doc.dump() << '\n';
    finish_output(out, path);
}

void write_network(const fs::path& nodes_path, const fs::path& edges_path,
                   const SpatialNetwork& net) {
    {
        auto out = open_output(nodes_path);
        std::string line;
        out << "node_id,lat,lon\n";
        for (const auto& n : net.nodes) {
            line = n.node_id;
            line += ',';
            append_double(line, n.geo.lat);
            line += ',';
            append_double(line, n.geo.lon);
            line += '\n';
            out << line;
        }
        finish_output(out, nodes_path);
    }
    auto out = open_output(edges_path);
    std::string line;
    out << "src,dst,travel_min\n";
    for (const auto& e : net.edges) {
        line = net.nodes[e.a].node_id + ',' + net.nodes[e.b].node_id + ',';
        append_double(line, e.travel_min);
        line += '\n';
        out << line;
    }
    finish_output(out, edges_path);
}

}  // namespace herigraph
