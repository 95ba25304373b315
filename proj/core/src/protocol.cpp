#include "aversion/protocol.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "aversion/error.hpp"
#include "json_codec.hpp"

namespace aversion::protocol {

using nlohmann::json;

namespace {

json parse_object(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error&) {
    throw ProtocolError("message is not valid JSON");
  }
  if (!doc.is_object()) throw ProtocolError("message must be a JSON object");
  return doc;
}

std::string string_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw ProtocolError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

double number_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) {
    throw ProtocolError(std::string("field '") + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

ControlMessage parse_control(std::string_view line) {
  const json doc = parse_object(line);
  const std::string type = string_field(doc, "type");
  if (type == "set_distance") {
    const double cm = number_field(doc, "cm");
    if (!std::isfinite(cm)) throw ProtocolError("'cm' must be finite");
    return SetDistance{cm};
  }
  if (type == "set_profile") {
    const std::string name = string_field(doc, "relationship");
    const auto r = parse_relationship(name);
    if (!r) throw ProtocolError("unknown relationship '" + name + "'");
    return SetProfile{*r};
  }
  if (type == "set_dominance") {
    const std::string name = string_field(doc, "level");
    const auto d = parse_dominance(name);
    if (!d) throw ProtocolError("unknown dominance level '" + name + "'");
    return SetDominance{*d};
  }
  if (type == "reset") return Reset{};
  throw ProtocolError("unknown message type '" + type + "'");
}

std::string_view type_name(const ControlMessage& message) noexcept {
  struct Visitor {
    std::string_view operator()(const SetDistance&) const { return "set_distance"; }
    std::string_view operator()(const SetProfile&) const { return "set_profile"; }
    std::string_view operator()(const SetDominance&) const { return "set_dominance"; }
    std::string_view operator()(const Reset&) const { return "reset"; }
  };
  return std::visit(Visitor{}, message);
}

std::string encode(const ControlMessage& message) {
  nlohmann::ordered_json doc = {{"type", std::string(type_name(message))}};
  if (const auto* m = std::get_if<SetDistance>(&message)) {
    doc["cm"] = m->cm;
  } else if (const auto* p = std::get_if<SetProfile>(&message)) {
    doc["relationship"] = std::string(to_string(p->relationship));
  } else if (const auto* d = std::get_if<SetDominance>(&message)) {
    doc["level"] = std::string(to_string(d->level));
  }
  return doc.dump();
}

std::string encode_tick(const engine::TickEvent& event) {
  return detail::tick_json(event).dump();
}

TickMessage decode_tick(std::string_view line) {
  const json doc = parse_object(line);
  if (string_field(doc, "type") != "tick") throw ProtocolError("not a tick message");
  TickMessage m;
  const auto frame = doc.find("frame");
  if (frame == doc.end() || !frame->is_number_unsigned()) {
    throw ProtocolError("field 'frame' must be a non-negative integer");
  }
  m.frame = frame->get<std::uint64_t>();
  m.d_raw = number_field(doc, "d_raw");
  m.d = number_field(doc, "d");
  m.n = number_field(doc, "n");
  m.s = number_field(doc, "s");
  m.e_int = number_field(doc, "e_int");
  const std::string phase = string_field(doc, "phase");
  if (phase == "idle") {
    m.phase = affect::Phase::Idle;
  } else if (phase == "enduring") {
    m.phase = affect::Phase::Enduring;
  } else if (phase == "avoiding") {
    m.phase = affect::Phase::Avoiding;
  } else {
    throw ProtocolError("unknown phase '" + phase + "'");
  }
  const auto avoid = doc.find("avoid");
  if (avoid == doc.end()) throw ProtocolError("field 'avoid' is required");
  if (!avoid->is_null()) {
    if (!avoid->is_object()) throw ProtocolError("field 'avoid' must be an object or null");
    const auto pattern = behavior::parse_pattern(string_field(*avoid, "pattern"));
    if (!pattern) throw ProtocolError("unknown avoidance pattern");
    m.avoid = engine::AvoidanceRecord{*pattern, number_field(*avoid, "intensity")};
  }
  return m;
}

std::string encode_profile(const proxemics::RelationshipProfile& profile) {
  return nlohmann::ordered_json{{"type", "profile"},
              {"relationship", std::string(to_string(profile.label))},
              {"dominance", std::string(to_string(profile.dominance))},
              {"a", profile.curve.amplitude()},
              {"b", profile.curve.rate_per_cm()},
              {"c", profile.decay},
              {"e_th", profile.tolerance},
              {"e_max", profile.max_admissible},
              {"activation_radius_cm", profile.activation_radius_cm}}
      .dump();
}

std::string encode_ack(std::string_view request_type) {
  return nlohmann::ordered_json{{"type", "ack"}, {"request", std::string(request_type)}}.dump();
}

std::string encode_error(std::string_view message) {
  return nlohmann::ordered_json{{"type", "error"}, {"message", std::string(message)}}.dump();
}

std::string message_type(std::string_view line) {
  try {
    const json doc = json::parse(line);
    if (doc.is_object() && doc.contains("type") && doc["type"].is_string()) {
      return doc["type"].get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return {};
}

}  // namespace aversion::protocol
