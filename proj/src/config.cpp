#include "herigraph/pipeline.hpp"

#include <fstream>
#include <functional>
#include <thread>

#include "herigraph/error.hpp"
#include "herigraph/text.hpp"

namespace herigraph {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw DataError("config", "setting " + std::string(key) + " = '" + std::string(value) +
                                  "': expected " + std::string(expected));
}

double as_double(std::string_view key, std::string_view v) {
    const auto x = parse_double(v);
    if (!x) bad_value(key, v, "a number");
    return *x;
}

std::uint64_t as_uint(std::string_view key, std::string_view v) {
    const auto x = parse_uint(v);
    if (!x) bad_value(key, v, "a non-negative integer");
    return *x;
}

bool as_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, v, "true or false");
}

fs::path as_path(std::string_view v, const fs::path& base) {
    fs::path p{std::string(v)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

std::string show(double v) { return format_double(v); }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(std::uint64_t v) { return std::to_string(v); }

std::string show_path(const fs::path& p, const fs::path& base) {
    if (p.empty()) return {};
    if (!base.empty()) {
        const auto rel = p.lexically_relative(base);
        if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    }
    return p.generic_string();
}

struct Setting {
    const char* key;
    std::function<void(PipelineConfig&, std::string_view, const fs::path&)> set;
    std::function<std::string(const PipelineConfig&, const fs::path&)> get;
};

template <class T>
Setting number(const char* key, T PipelineConfig::*group, double T::*field) {
    return {key, [=](PipelineConfig& c, std::string_view v, const fs::path&) { (c.*group).*field = as_double(key, v); },
            [=](const PipelineConfig& c, const fs::path&) { return show((c.*group).*field); }};
}

template <class T, class Int>
Setting integer(const char* key, T PipelineConfig::*group, Int T::*field) {
    return {key,
            [=](PipelineConfig& c, std::string_view v, const fs::path&) {
                (c.*group).*field = static_cast<Int>(as_uint(key, v));
            },
            [=](const PipelineConfig& c, const fs::path&) {
                return show(static_cast<std::uint64_t>((c.*group).*field));
            }};
}

template <class T>
Setting flag(const char* key, T PipelineConfig::*group, bool T::*field) {
    return {key, [=](PipelineConfig& c, std::string_view v, const fs::path&) { (c.*group).*field = as_bool(key, v); },
            [=](const PipelineConfig& c, const fs::path&) { return show((c.*group).*field); }};
}

Setting path(const char* key, fs::path PipelineConfig::*field) {
    return {key, [=](PipelineConfig& c, std::string_view v, const fs::path& base) { c.*field = as_path(v, base); },
            [=](const PipelineConfig& c, const fs::path& base) { return show_path(c.*field, base); }};
}

Setting input(const char* key, fs::path DatasetPaths::*field) {
    return {key,
            [=](PipelineConfig& c, std::string_view v, const fs::path& base) { c.inputs.*field = as_path(v, base); },
            [=](const PipelineConfig& c, const fs::path& base) { return show_path(c.inputs.*field, base); }};
}

const std::vector<Setting>& settings() {
    using P = PipelineConfig;
    static const std::vector<Setting> table = {
        input("posts", &DatasetPaths::posts),
        input("relations", &DatasetPaths::relations),
        input("network_nodes", &DatasetPaths::network_nodes),
        input("network_edges", &DatasetPaths::network_edges),
        path("out", &P::out),
        {"threads", [](P& c, std::string_view v, const fs::path&) { c.threads = static_cast<unsigned>(as_uint("threads", v)); },
         [](const P& c, const fs::path&) { return std::to_string(c.threads); }},
        integer("seed", &P::synth, &SynthConfig::seed),
        number("alpha_T", &P::graph, &GraphConfig::alpha_T),
        number("alpha_U1", &P::graph, &GraphConfig::alpha_U1),
        number("alpha_U2", &P::graph, &GraphConfig::alpha_U2),
        number("alpha_U3", &P::graph, &GraphConfig::alpha_U3),
        number("beta_U", &P::graph, &GraphConfig::beta_U),
        number("max_travel_min", &P::graph, &GraphConfig::max_travel_min),
        integer("hv_top_n", &P::graph, &GraphConfig::hv_top_n),
        integer("ha_top_n", &P::graph, &GraphConfig::ha_top_n),
        number("hv_conf_min", &P::graph, &GraphConfig::hv_conf_min),
        number("hv_agree_min", &P::graph, &GraphConfig::hv_agree_min),
        number("ha_conf_min", &P::graph, &GraphConfig::ha_conf_min),
        number("ha_agree_min", &P::graph, &GraphConfig::ha_agree_min),
        flag("temporal_set_rank", &P::graph, &GraphConfig::temporal_set_rank),
        flag("spatial_unit_diagonal", &P::graph, &GraphConfig::spatial_unit_diagonal),
        flag("export_composed", &P::outputs, &OutputOptions::composed_edgelist),
        flag("export_rank_size_csv", &P::outputs, &OutputOptions::rank_size_csv),
        path("reference_stats", &P::reference_stats),
        path("compare_posts", &P::compare_posts),
        integer("synth.posts", &P::synth, &SynthConfig::posts),
        integer("synth.users", &P::synth, &SynthConfig::users),
        integer("synth.week_span", &P::synth, &SynthConfig::week_span),
        integer("synth.start_year", &P::synth, &SynthConfig::start_year),
        integer("synth.groups", &P::synth, &SynthConfig::groups),
        integer("synth.groups_per_user", &P::synth, &SynthConfig::groups_per_user),
        integer("synth.contacts_per_user", &P::synth, &SynthConfig::contacts_per_user),
        integer("synth.grid", &P::synth, &SynthConfig::grid),
        number("synth.grid_spacing_m", &P::synth, &SynthConfig::grid_spacing_m),
        number("synth.speed_kmh", &P::synth, &SynthConfig::speed_kmh),
        number("synth.no_text_fraction", &P::synth, &SynthConfig::no_text_fraction),
        number("synth.dirichlet_alpha", &P::synth, &SynthConfig::dirichlet_alpha),
        number("synth.face_fraction", &P::synth, &SynthConfig::face_fraction),
        number("synth.agree_prob", &P::synth, &SynthConfig::agree_prob),
        {"synth.center_lat", [](P& c, std::string_view v, const fs::path&) { c.synth.center.lat = as_double("synth.center_lat", v); },
         [](const P& c, const fs::path&) { return show(c.synth.center.lat); }},
        {"synth.center_lon", [](P& c, std::string_view v, const fs::path&) { c.synth.center.lon = as_double("synth.center_lon", v); },
         [](const P& c, const fs::path&) { return show(c.synth.center.lon); }},
        {"synth.local_lang", [](P& c, std::string_view v, const fs::path&) { c.synth.local_lang = std::string(v); },
         [](const P& c, const fs::path&) { return c.synth.local_lang; }},
    };
    return table;
}

}  // namespace

unsigned PipelineConfig::worker_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value, const fs::path& base) {
    for (const auto& s : settings()) {
        if (key == s.key) {
            s.set(cfg, trim(value), base);
            return;
        }
    }
    throw DataError("config", "unknown setting " + std::string(key));
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in || fs::is_directory(path)) throw IoError("config", "cannot read " + path.string());
    PipelineConfig cfg;
    const fs::path base = path.parent_path();
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) {
            throw DataError("config", path.string() + ":" + std::to_string(n) + ": expected key = value");
        }
        try {
            apply_setting(cfg, trim(v.substr(0, eq)), trim(v.substr(eq + 1)), base);
        } catch (const DataError& e) {
            throw DataError("config", path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return cfg;
}

std::string config_to_text(const PipelineConfig& cfg, const fs::path& base) {
    std::string out;
    for (const auto& s : settings()) {
        const std::string v = s.get(cfg, base);
        if (v.empty()) continue;
        out += s.key;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

}  // namespace herigraph
