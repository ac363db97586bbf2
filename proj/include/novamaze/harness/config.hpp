#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "novamaze/search/engine.hpp"
#include "novamaze/session/session.hpp"

namespace novamaze::harness {

// Headless NA-IEC policy script: alternate Novelty and Step, switching to a
// capped Optimize whenever a candidate ends within `optimize_radius` of the
// goal.
struct ScriptConfig {
  session::SelectorPolicy policy{.count = 3};
  double optimize_radius = 20.0;
  std::int64_t optimize_eval_cap = 10000;

  void validate() const;
};

struct HarnessConfig {
  search::EngineConfig engine;
  session::SessionConfig session;
  ScriptConfig script;

  void validate() const;
};

inline constexpr const char* kConfigEnvVar = "NOVAMAZE_CONFIG";

// Overlays a JSON document onto the defaults. Sections: "neat", "robot",
// "novelty", "session", "script"; keys are the field names. Unknown
// sections or keys and ill-typed values throw std::invalid_argument.
HarnessConfig config_from_json(const nlohmann::json& document);
HarnessConfig load_config(const std::filesystem::path& path);
// Defaults, or the file named by NOVAMAZE_CONFIG when that is set.
HarnessConfig config_from_env();

nlohmann::json to_json(const HarnessConfig& config);

}  // namespace novamaze::harness
