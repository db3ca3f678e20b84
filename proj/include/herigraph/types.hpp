#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace herigraph {

// Fixed vector widths of the upstream model outputs.
inline constexpr std::size_t kVisHiddenDim = 512;
inline constexpr std::size_t kFaceDim = 3;
inline constexpr std::size_t kSceneDim = 365;
inline constexpr std::size_t kSceneAttrDim = 102;
inline constexpr std::size_t kTextHiddenDim = 768;
inline constexpr std::size_t kLangDim = 3;
inline constexpr std::size_t kValueClasses = 11;      // OUV criteria (i)-(x) + Others
inline constexpr std::size_t kAttributeClasses = 9;   // depicted-scenery categories

// Top-n kept active by the soft activation filter on each logit block.
inline constexpr std::size_t kSceneTopN = 5;
inline constexpr std::size_t kSceneAttrTopN = 10;

inline constexpr std::size_t kVisualDim =
    kVisHiddenDim + kFaceDim + kSceneDim + kSceneAttrDim;  // 982
inline constexpr std::size_t kTextualDim = kTextHiddenDim + kLangDim;  // 771

inline constexpr double kSimplexTolerance = 1e-6;

struct GeoPoint {
    double lat = 0.0;  // degrees
    double lon = 0.0;  // degrees
};

struct FaceVector {
    std::int64_t count = 0;
    double confidence = 0.0;
    double area_ratio = 0.0;
};

using LangFlags = std::array<std::uint8_t, kLangDim>;  // English, local, other

// One post after upstream extraction. Optional text-derived vectors are
// empty when the post carries no usable text.
struct PostRecord {
    std::string post_id;
    std::string user_id;
    std::int64_t week_index = 0;
    GeoPoint geo;
    bool has_text = false;
    LangFlags lang_flags{0, 0, 0};
    FaceVector face_vec;
    std::vector<double> vis_hidden;
    std::vector<double> scene_logits;
    std::vector<double> scene_attr_logits;
    std::vector<double> text_hidden;
    std::vector<double> hv_logits_a;
    std::vector<double> hv_logits_b;
    std::vector<double> ha_logits_a;
    std::vector<double> ha_logits_b;
};

// Users, their direct contacts and their group subscriptions. Users and
// groups are interned to dense indices; contacts hold (a, b) with a < b.
class UserRelations {
public:
    // Registers a user if unseen; returns its index either way.
    std::uint32_t add_user(const std::string& user_id);
    std::optional<std::uint32_t> find_user(const std::string& user_id) const;

    // Records an undirected contact; duplicates collapse. Endpoints must be
    // registered and distinct.
    void add_contact(std::uint32_t a, std::uint32_t b);
    void add_group(std::uint32_t user, const std::string& group_id);

    // Sorts contact pairs and per-user group lists; call after bulk loading.
    void finalize();

    std::size_t user_count() const { return users_.size(); }
    const std::vector<std::string>& users() const { return users_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& contacts() const {
        return contacts_;
    }
    // Sorted group indices followed by `user`.
    const std::vector<std::uint32_t>& groups_of(std::uint32_t user) const {
        return groups_[user];
    }
    const std::vector<std::string>& group_names() const { return group_names_; }

private:
    std::vector<std::string> users_;
    std::unordered_map<std::string, std::uint32_t> user_index_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> contacts_;
    std::vector<std::vector<std::uint32_t>> groups_;
    std::vector<std::string> group_names_;
    std::unordered_map<std::string, std::uint32_t> group_index_;
};

struct NetworkNode {
    std::string node_id;
    GeoPoint geo;
};

// Undirected edge between node indices (a < b), travel time in minutes.
struct NetworkEdge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double travel_min = 0.0;
};

// Street-intersection network. Parallel edges collapse to the fastest one.
struct SpatialNetwork {
    std::vector<NetworkNode> nodes;
    std::vector<NetworkEdge> edges;  // sorted by (a, b), unique
};

struct GraphConfig {
    double alpha_T = 0.5;
    double alpha_U1 = 1.0;
    double alpha_U2 = 1.0;
    double alpha_U3 = 1.0;
    double beta_U = 0.05;
    double max_travel_min = 20.0;
    std::size_t hv_top_n = 3;
    std::size_t ha_top_n = 1;
    double hv_conf_min = 0.75;
    double hv_agree_min = 0.5;
    double ha_conf_min = 0.7;
    double ha_agree_min = 1.0;

    // Replication switches.
    bool temporal_set_rank = false;      // link consecutive ranks of the week set
    bool spatial_unit_diagonal = true;   // same spatial node -> weight 1

    // Throws DataError on the first out-of-range field.
    void validate() const;
};

}  // namespace herigraph
