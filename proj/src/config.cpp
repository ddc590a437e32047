#include "bforest/config.hpp"

#include <cstdio>
#include <fstream>

#include "bforest/errors.hpp"

namespace bforest {

namespace {

template <class T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

EngineConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be an object");
  EngineConfig config;
  if (doc.contains("breakpoints")) {
    config.breakpoints = BreakpointSpec(get_or<std::vector<std::vector<double>>>(doc, "breakpoints", {}));
  } else if (doc.contains("alphabet_sizes")) {
    const auto sizes = get_or<std::vector<unsigned>>(doc, "alphabet_sizes", {});
    if (sizes.empty()) throw ConfigError("config: alphabet_sizes is empty");
    config.breakpoints = BreakpointSpec::gaussian(sizes);
  } else {
    throw ConfigError("config: 'breakpoints' or 'alphabet_sizes' required");
  }

  const auto non_negative = [&](const char* key, long long fallback) {
    const auto v = get_or<long long>(doc, key, fallback);
    if (v < 0) throw ConfigError(std::string("config: '") + key + "' must be non-negative");
    return v;
  };
  config.log_base = static_cast<unsigned>(non_negative("log_base", config.log_base));
  config.relevance_threshold =
      static_cast<unsigned>(non_negative("relevance_threshold", config.relevance_threshold));
  config.hysteresis_margin = get_or<double>(doc, "hysteresis_margin", config.hysteresis_margin);
  config.initiation_run = static_cast<unsigned>(non_negative("initiation_run", config.initiation_run));
  config.termination_run =
      static_cast<unsigned>(non_negative("termination_run", config.termination_run));
  config.buffer_capacity =
      static_cast<std::size_t>(non_negative("buffer_capacity", static_cast<long long>(config.buffer_capacity)));
  config.validate();
  return config;
}

nlohmann::json config_to_json(const EngineConfig& config) {
  return {{"breakpoints", config.breakpoints.channels()},
          {"log_base", config.log_base},
          {"relevance_threshold", config.relevance_threshold},
          {"hysteresis_margin", config.hysteresis_margin},
          {"initiation_run", config.initiation_run},
          {"termination_run", config.termination_run},
          {"buffer_capacity", config.buffer_capacity}};
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void save_config(const EngineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path.string());
  out << config_to_json(config).dump(2) << "\n";
}

std::string config_hash(const EngineConfig& config) {
  const nlohmann::json canonical = {{"breakpoints", config.breakpoints.channels()},
                                    {"log_base", config.log_base},
                                    {"hysteresis_margin", config.hysteresis_margin},
                                    {"initiation_run", config.initiation_run},
                                    {"termination_run", config.termination_run}};
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace bforest
