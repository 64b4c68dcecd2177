#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "wiser/types.hpp"

namespace wiser {

nlohmann::json wlan_config_to_json(const WlanConfig& config);
WlanConfig wlan_config_from_json(const nlohmann::json& doc);

WlanConfig load_wlan_config(const std::filesystem::path& file);
void save_wlan_config(const WlanConfig& config, const std::filesystem::path& file);

}  // namespace wiser
