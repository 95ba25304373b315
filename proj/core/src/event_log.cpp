#include "aversion/event_log.hpp"

#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "aversion/error.hpp"
#include "json_codec.hpp"

namespace aversion::engine {

using nlohmann::json;

std::string event_record(const TickEvent& event) {
  nlohmann::ordered_json doc = detail::tick_json(event);
  if (event.command) {
    const MotionCommand& c = *event.command;
    doc["command"] = {
        {"pattern", std::string(behavior::to_string(c.pattern))},
        {"category", std::string(behavior::to_string(behavior::category_of(c.pattern)))},
        {"intensity", c.intensity},
        {"duration_ms", c.trajectory ? c.trajectory->duration_ms() : 0},
    };
  } else {
    doc["command"] = nullptr;
  }
  return doc.dump();
}

void write_event_log(std::ostream& out, std::span<const TickEvent> events) {
  for (const TickEvent& ev : events) out << event_record(ev) << '\n';
}

void write_timeline_csv(std::ostream& out, std::span<const TickEvent> events,
                        const proxemics::RelationshipProfile& profile,
                        std::uint32_t frame_period_ms) {
  // Shortest round-trip formatting, same as the JSON log.
  const auto num = [](double v) { return json(v).dump(); };
  out << "frame,time_s,d_raw,d,n,s,e_th,e_max,phase,e_int,avoid_pattern,avoid_intensity,command\n";
  for (const TickEvent& ev : events) {
    const double time_s = static_cast<double>(ev.frame) * frame_period_ms / 1000.0;
    out << ev.frame << ',' << num(time_s) << ',' << num(ev.raw_distance_cm) << ','
        << num(ev.distance_cm) << ',' << num(ev.momentary) << ',' << num(ev.level) << ','
        << num(profile.tolerance) << ',' << num(profile.max_admissible) << ','
        << affect::to_string(ev.phase) << ',' << num(ev.endurance_intensity) << ',';
    if (ev.avoidance) {
      out << behavior::to_string(ev.avoidance->pattern) << ',' << num(ev.avoidance->intensity);
    } else {
      out << ',';
    }
    out << ',';
    if (ev.command) out << behavior::to_string(ev.command->pattern);
    out << '\n';
  }
}

std::string summary_json(const RunSummary& summary, const ScenarioConfig& config) {
  const auto profile = config.resolved_profile();
  json doc = {
      {"relationship", std::string(to_string(profile.label))},
      {"dominance", std::string(to_string(profile.dominance))},
      {"source", sensor::to_string(config.source)},
      {"frames", summary.frames},
      {"first_crossing", summary.first_crossing ? json(*summary.first_crossing) : json(nullptr)},
      {"max_s", summary.max_level},
      {"avoidance_count", summary.avoidance_count},
      {"avoidance_frames", summary.avoidance_frames},
      {"e_th", profile.tolerance},
      {"e_max", profile.max_admissible},
      {"c", profile.decay},
  };
  return doc.dump(2);
}

void write_run_outputs(const std::filesystem::path& dir, std::span<const TickEvent> events,
                       const ScenarioConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  const auto open = [&dir](const char* name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("events.ndjson");
    write_event_log(f, events);
  }
  {
    auto f = open("timeline.csv");
    write_timeline_csv(f, events, config.resolved_profile(), config.frame_period_ms);
  }
  {
    auto f = open("summary.json");
    f << summary_json(summarize(events), config) << '\n';
  }
}

}  // namespace aversion::engine
