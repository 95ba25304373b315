#include "aversion/scenario.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "aversion/error.hpp"

namespace aversion::engine {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

template <typename T>
T get_as(const json& doc, const char* key) {
  if constexpr (std::is_unsigned_v<T>) {
    // get<unsigned>() would wrap negative numbers silently.
    if (!doc.at(key).is_number_unsigned()) {
      throw ConfigError(std::string("scenario config: field '") + key +
                        "' must be a non-negative integer");
    }
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("scenario config: field '") + key + "' has the wrong type");
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario config: top level must be an object");

  static const char* const kKnown[] = {"relationship",     "dominance",    "source",
                                       "frames",           "frame_period_ms",
                                       "refractory_frames", "idle_epsilon", "profiles",
                                       "patterns",         "overrides"};
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("scenario config: unknown field '" + key + "'");
  }

  ScenarioConfig cfg;
  if (doc.contains("profiles")) {
    const json& p = doc["profiles"];
    if (p.is_string()) {
      cfg.profiles = proxemics::load_profiles(resolve(base_dir, p.get<std::string>()));
    } else if (p.is_object()) {
      cfg.profiles = proxemics::parse_profiles(p.dump());
    } else {
      throw ConfigError("scenario config: 'profiles' must be a path or an object");
    }
  }
  if (doc.contains("patterns")) {
    const auto path = resolve(base_dir, get_as<std::string>(doc, "patterns"));
    cfg.patterns = std::make_shared<const behavior::PatternLibrary>(behavior::PatternLibrary::load(path));
  }
  if (doc.contains("relationship")) {
    const auto name = get_as<std::string>(doc, "relationship");
    const auto r = parse_relationship(name);
    if (!r) throw ConfigError("scenario config: unknown relationship '" + name + "'");
    cfg.relationship = *r;
  }
  if (doc.contains("dominance")) {
    const auto name = get_as<std::string>(doc, "dominance");
    const auto d = parse_dominance(name);
    if (!d) throw ConfigError("scenario config: unknown dominance '" + name + "'");
    cfg.dominance = *d;
  }
  if (doc.contains("source")) {
    cfg.source = sensor::parse_source_spec(get_as<std::string>(doc, "source"));
    if (auto* trace = std::get_if<sensor::TraceSpec>(&cfg.source)) {
      trace->path = resolve(base_dir, trace->path.string());
    }
  }
  if (doc.contains("frames")) cfg.max_frames = get_as<std::uint64_t>(doc, "frames");
  if (doc.contains("frame_period_ms")) cfg.frame_period_ms = get_as<std::uint32_t>(doc, "frame_period_ms");
  if (doc.contains("refractory_frames")) {
    cfg.policy.refractory_frames = get_as<std::uint32_t>(doc, "refractory_frames");
  }
  if (doc.contains("idle_epsilon")) cfg.policy.idle_epsilon = get_as<double>(doc, "idle_epsilon");

  if (doc.contains("overrides")) {
    const json& o = doc["overrides"];
    if (!o.is_object()) throw ConfigError("scenario config: 'overrides' must be an object");
    for (const auto& [rel_name, fields] : o.items()) {
      const auto rel = parse_relationship(rel_name);
      if (!rel) throw ConfigError("scenario config: unknown relationship '" + rel_name + "'");
      if (!fields.is_object()) throw ConfigError("scenario config: overrides must be objects");
      for (const auto& [field, value] : fields.items()) {
        if (!value.is_number()) throw ConfigError("scenario config: override values must be numbers");
        apply_override(cfg, ProfileOverride{*rel, field, value.get<double>()});
      }
    }
  }
  return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config(buf.str(), path.parent_path());
}

std::optional<std::filesystem::path> config_path_from_env() {
  const char* value = std::getenv(kConfigEnvVar);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::filesystem::path(value);
}

ProfileOverride parse_profile_override(std::string_view text) {
  const auto dot = text.find('.');
  const auto eq = text.find('=');
  if (dot == std::string_view::npos || eq == std::string_view::npos || eq < dot) {
    throw ConfigError("override '" + std::string(text) + "' must look like friend.e_th=0.8");
  }
  const auto rel = parse_relationship(text.substr(0, dot));
  if (!rel) throw ConfigError("override '" + std::string(text) + "': unknown relationship");
  const std::string_view number = text.substr(eq + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size()) {
    throw ConfigError("override '" + std::string(text) + "': value is not a number");
  }
  return ProfileOverride{*rel, std::string(text.substr(dot + 1, eq - dot - 1)), value};
}

void apply_override(ScenarioConfig& config, const ProfileOverride& change) {
  const auto it = config.profiles.find(change.relationship);
  if (it == config.profiles.end()) {
    throw ConfigError("no profile for relationship '" +
                      std::string(to_string(change.relationship)) + "'");
  }
  proxemics::apply_override(it->second, change.field, change.value);
}

}  // namespace aversion::engine
