#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aversion/error.hpp"
#include "aversion/proxemics.hpp"
#include "defaults.hpp"

namespace aversion::proxemics {

using nlohmann::json;

namespace {

double number_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field '" + key + "'");
  if (!it->is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

RelationshipProfile profile_from_json(Relationship label, const json& obj) {
  const std::string where = "profile '" + std::string(to_string(label)) + "'";
  if (!obj.is_object()) throw ConfigError(where + " must be an object");

  RelationshipProfile p;
  p.label = label;
  p.curve = DislikeCurve(number_field(obj, "a", where), number_field(obj, "b", where));
  p.decay = number_field(obj, "c", where);
  p.tolerance = number_field(obj, "e_th", where);
  p.max_admissible = number_field(obj, "e_max", where);
  p.activation_radius_cm = number_field(obj, "activation_radius_cm", where);
  if (obj.contains("motion_gain")) p.motion_gain = number_field(obj, "motion_gain", where);

  const auto dom = obj.find("dominance");
  if (dom == obj.end() || !dom->is_string()) {
    throw ConfigError(where + ": 'dominance' must be one of low, medium, high");
  }
  const auto level = parse_dominance(dom->get<std::string>());
  if (!level) throw ConfigError(where + ": unknown dominance '" + dom->get<std::string>() + "'");
  p.dominance = *level;

  p.validate();
  return p;
}

}  // namespace

ProfileSet parse_profiles(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("profiles: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("profiles: top level must be an object");

  ProfileSet out;
  for (const auto& [key, value] : doc.items()) {
    const auto label = parse_relationship(key);
    if (!label) throw ConfigError("profiles: unknown relationship '" + key + "'");
    out.emplace(*label, profile_from_json(*label, value));
  }
  return out;
}

ProfileSet load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_profiles(buf.str());
}

std::string profiles_to_json(const ProfileSet& profiles) {
  json doc = json::object();
  for (const auto& [label, p] : profiles) {
    doc[std::string(to_string(label))] = {
        {"a", p.curve.amplitude()},
        {"b", p.curve.rate_per_cm()},
        {"c", p.decay},
        {"e_th", p.tolerance},
        {"e_max", p.max_admissible},
        {"activation_radius_cm", p.activation_radius_cm},
        {"dominance", std::string(to_string(p.dominance))},
        {"motion_gain", p.motion_gain},
    };
  }
  return doc.dump(2);
}

const ProfileSet& default_profiles() {
  static const ProfileSet profiles = parse_profiles(detail::kDefaultProfilesJson);
  return profiles;
}

}  // namespace aversion::proxemics
