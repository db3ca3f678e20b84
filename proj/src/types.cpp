#include "herigraph/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herigraph/error.hpp"

namespace herigraph {

std::uint32_t UserRelations::add_user(const std::string& user_id) {
    auto [it, inserted] = user_index_.try_emplace(user_id, static_cast<std::uint32_t>(users_.size()));
    if (inserted) {
        users_.push_back(user_id);
        groups_.emplace_back();
    }
    return it->second;
}

std::optional<std::uint32_t> UserRelations::find_user(const std::string& user_id) const {
    auto it = user_index_.find(user_id);
    if (it == user_index_.end()) return std::nullopt;
    return it->second;
}

void UserRelations::add_contact(std::uint32_t a, std::uint32_t b) {
    if (a >= users_.size() || b >= users_.size() || a == b) {
        throw DataError("schema", "invalid contact pair");
    }
    if (a > b) std::swap(a, b);
    contacts_.emplace_back(a, b);
}

void UserRelations::add_group(std::uint32_t user, const std::string& group_id) {
    auto [it, inserted] =
        group_index_.try_emplace(group_id, static_cast<std::uint32_t>(group_names_.size()));
    if (inserted) group_names_.push_back(group_id);
    groups_.at(user).push_back(it->second);
}

void UserRelations::finalize() {
    std::sort(contacts_.begin(), contacts_.end());
    contacts_.erase(std::unique(contacts_.begin(), contacts_.end()), contacts_.end());
    for (auto& g : groups_) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
    }
}

void GraphConfig::validate() const {
    auto unit = [](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DataError("config", std::string(name) + " must lie in [0, 1]");
        }
    };
    if (!(alpha_T >= 0.0 && alpha_T < 1.0)) throw DataError("config", "alpha_T must lie in [0, 1)");
    for (auto [name, a] : {std::pair{"alpha_U1", alpha_U1}, std::pair{"alpha_U2", alpha_U2},
                           std::pair{"alpha_U3", alpha_U3}}) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw DataError("config", std::string(name) + " must be a non-negative real");
        }
    }
    if (!(beta_U > 0.0 && beta_U < 1.0)) throw DataError("config", "beta_U must lie in (0, 1)");
    if (!(max_travel_min > 0.0) || !std::isfinite(max_travel_min)) {
        throw DataError("config", "max_travel_min must be positive");
    }
    if (hv_top_n < 1 || hv_top_n > kValueClasses) {
        throw DataError("config", "hv_top_n must lie in [1, 11]");
    }
    if (ha_top_n < 1 || ha_top_n > kAttributeClasses) {
        throw DataError("config", "ha_top_n must lie in [1, 9]");
    }
    unit("hv_conf_min", hv_conf_min);
    unit("hv_agree_min", hv_agree_min);
    unit("ha_conf_min", ha_conf_min);
    unit("ha_agree_min", ha_agree_min);
}

}  // namespace herigraph
