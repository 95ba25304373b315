#pragma once

#include <nlohmann/json.hpp>

#include "aversion/engine.hpp"

namespace aversion::detail {

// Tick fields shared by the stream protocol and the event log.
inline nlohmann::ordered_json tick_json(const engine::TickEvent& ev) {
  nlohmann::ordered_json avoid = nullptr;
  if (ev.avoidance) {
    avoid = {{"pattern", std::string(behavior::to_string(ev.avoidance->pattern))},
             {"intensity", ev.avoidance->intensity}};
  }
  return {{"type", "tick"},
          {"frame", ev.frame},
          {"d_raw", ev.raw_distance_cm},
          {"d", ev.distance_cm},
          {"n", ev.momentary},
          {"s", ev.level},
          {"phase", std::string(affect::to_string(ev.phase))},
          {"e_int", ev.endurance_intensity},
          {"avoid", std::move(avoid)}};
}

}  // namespace aversion::detail
