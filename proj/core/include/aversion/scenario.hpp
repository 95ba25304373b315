#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "aversion/engine.hpp"

namespace aversion::engine {

/// Environment variable naming a scenario config file.
inline constexpr const char* kConfigEnvVar = "AVERSION_CONFIG";

/// Scenario config file (JSON). Every key is optional:
///
///   {
///     "relationship": "friend",
///     "dominance": "high",
///     "source": "const:30",
///     "frames": 200,
///     "frame_period_ms": 100,
///     "refractory_frames": 10,
///     "idle_epsilon": 1e-4,
///     "profiles": "profiles.json" | { ...inline profile set... },
///     "patterns": "patterns.json",
///     "overrides": { "friend": { "e_th": 0.8 } }
///   }
///
/// Relative paths resolve against base_dir. Throws ConfigError.
ScenarioConfig parse_scenario_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// Value of AVERSION_CONFIG when set and non-empty.
std::optional<std::filesystem::path> config_path_from_env();

/// `<relationship>.<field>=<value>`, e.g. `friend.e_th=0.8`.
struct ProfileOverride {
  Relationship relationship;
  std::string field;
  double value;
};

/// Throws ConfigError for malformed text.
ProfileOverride parse_profile_override(std::string_view text);
/// Throws ConfigError when the relationship has no profile, ValidationError
/// when the result breaks a profile invariant.
void apply_override(ScenarioConfig& config, const ProfileOverride& change);

}  // namespace aversion::engine
