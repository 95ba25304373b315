#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "aversion/engine.hpp"

namespace aversion::engine {

/// One NDJSON record: the tick message fields plus the motion command
/// ({"pattern","category","intensity","duration_ms"} or null).
std::string event_record(const TickEvent& event);

void write_event_log(std::ostream& out, std::span<const TickEvent> events);

/// Flat plotting table; thresholds are repeated on every row.
/// Columns: frame,time_s,d_raw,d,n,s,e_th,e_max,phase,e_int,avoid_pattern,avoid_intensity,command
void write_timeline_csv(std::ostream& out, std::span<const TickEvent> events,
                        const proxemics::RelationshipProfile& profile,
                        std::uint32_t frame_period_ms = sensor::kDefaultFramePeriodMs);

std::string summary_json(const RunSummary& summary, const ScenarioConfig& config);

/// Writes events.ndjson, timeline.csv and summary.json into `dir`
/// (created if missing). Throws Error on I/O failure.
void write_run_outputs(const std::filesystem::path& dir, std::span<const TickEvent> events,
                       const ScenarioConfig& config);

}  // namespace aversion::engine
