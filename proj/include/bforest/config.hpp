#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bforest/types.hpp"

namespace bforest {

// Config document:
// {
//   "breakpoints": [[-0.5, 0.5], [-0.5, 0.5]],  // explicit, one list per channel
//   "alphabet_sizes": [4, 4],                   // or Gaussian quantiles per channel
//   "log_base": 10,
//   "relevance_threshold": 5,
//   "hysteresis_margin": 0.05,
//   "initiation_run": 2,
//   "termination_run": 3,
//   "buffer_capacity": 65536
// }
// Explicit breakpoints take precedence over alphabet_sizes.
EngineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const EngineConfig& config);

EngineConfig load_config(const std::filesystem::path& path);
void save_config(const EngineConfig& config, const std::filesystem::path& path);

// Hex FNV-1a digest over the settings that determine forest contents.
std::string config_hash(const EngineConfig& config);

}  // namespace bforest
