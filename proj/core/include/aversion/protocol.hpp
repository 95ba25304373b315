#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "aversion/engine.hpp"

// Control/streaming wire format. Every message is one JSON object per line.
//
// Inbound (client -> engine):
//   {"type":"set_distance","cm":N}
//   {"type":"set_profile","relationship":"friend"}
//   {"type":"set_dominance","level":"high"}
//   {"type":"reset"}
//
// Outbound (engine -> client):
//   {"type":"tick","frame":..,"d_raw":..,"d":..,"n":..,"s":..,"phase":"enduring",
//    "e_int":..,"avoid":{"pattern":"strike","intensity":..}|null}
//   {"type":"profile",...}   on connect and whenever the active profile changes
//   {"type":"ack","request":"set_distance"}
//   {"type":"error","message":"..."}
namespace aversion::protocol {

struct SetDistance {
  double cm;
};
struct SetProfile {
  Relationship relationship;
};
struct SetDominance {
  Dominance level;
};
struct Reset {};

using ControlMessage = std::variant<SetDistance, SetProfile, SetDominance, Reset>;

/// Throws ProtocolError for malformed JSON, unknown types or bad fields.
ControlMessage parse_control(std::string_view line);
std::string encode(const ControlMessage& message);
std::string_view type_name(const ControlMessage& message) noexcept;

std::string encode_tick(const engine::TickEvent& event);

/// Decoded outbound tick, as a client sees it.
struct TickMessage {
  std::uint64_t frame = 0;
  double d_raw = 0.0;
  double d = 0.0;
  double n = 0.0;
  double s = 0.0;
  affect::Phase phase = affect::Phase::Idle;
  double e_int = 0.0;
  std::optional<engine::AvoidanceRecord> avoid;
};

/// Throws ProtocolError when the line is not a well-formed tick message.
TickMessage decode_tick(std::string_view line);

std::string encode_profile(const proxemics::RelationshipProfile& profile);
std::string encode_ack(std::string_view request_type);
std::string encode_error(std::string_view message);

/// The "type" field of any message, or empty when absent/unparsable.
std::string message_type(std::string_view line);

}  // namespace aversion::protocol
