#include "aversion/engine.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "aversion/error.hpp"

namespace aversion::engine {

proxemics::RelationshipProfile ScenarioConfig::resolved_profile() const {
  const auto it = profiles.find(relationship);
  if (it == profiles.end()) {
    throw ConfigError("no profile for relationship '" + std::string(to_string(relationship)) + "'");
  }
  proxemics::RelationshipProfile p = it->second;
  if (dominance) p.dominance = *dominance;
  return p;
}

void ScenarioConfig::validate() const {
  resolved_profile().validate();
  policy.validate();
  if (frame_period_ms == 0) throw ConfigError("frame_period_ms must be positive");
  if (!patterns) throw ConfigError("no pattern library");
  if (std::holds_alternative<sensor::SyntheticParams>(source) && !max_frames) {
    throw ConfigError("synthetic sources need a frame count");
  }
}

bool same_fields(const TickEvent& a, const TickEvent& b) noexcept {
  const bool commands_match =
      a.command.has_value() == b.command.has_value() &&
      (!a.command || (a.command->pattern == b.command->pattern &&
                      a.command->intensity == b.command->intensity));
  return a.frame == b.frame && a.raw_distance_cm == b.raw_distance_cm &&
         a.distance_cm == b.distance_cm && a.momentary == b.momentary && a.level == b.level &&
         a.phase == b.phase && a.endurance_intensity == b.endurance_intensity &&
         a.avoidance == b.avoidance && commands_match;
}

// ---------------------------------------------------------------------------

Simulator::Simulator(proxemics::RelationshipProfile profile, affect::Policy policy,
                     std::shared_ptr<const behavior::PatternLibrary> patterns,
                     affect::AffectState initial)
    : profile_(std::move(profile)),
      policy_(policy),
      patterns_(std::move(patterns)),
      state_(initial) {
  profile_.validate();
  policy_.validate();
  if (!patterns_) throw ValidationError("simulator needs a pattern library");
  if (!affect::is_consistent(state_)) throw ValidationError("initial affect state is inconsistent");
}

TickEvent Simulator::tick(double raw_distance_cm) {
  TickEvent ev;
  ev.raw_distance_cm = raw_distance_cm;
  ev.distance_cm = proxemics::clamp_distance(raw_distance_cm);
  ev.momentary = proxemics::momentary_dislike(profile_, ev.distance_cm);

  const affect::StepOutput out = affect::step(state_, ev.momentary, profile_, policy_);
  state_ = out.state;

  ev.frame = state_.frame;
  ev.level = out.level;
  ev.phase = state_.phase;
  ev.endurance_intensity = out.endurance_intensity;

  const double gain = profile_.motion_gain;
  if (out.avoidance) {
    const auto pattern = behavior::select_pattern(profile_.dominance, behavior::Stance::Avoiding);
    ev.avoidance = AvoidanceRecord{pattern, out.avoidance->intensity};
    const double intensity = std::min(out.avoidance->intensity * gain, 1.0);
    ev.command = MotionCommand{
        pattern, intensity,
        std::make_shared<const behavior::Trajectory>(patterns_->generate_avoidance(pattern, intensity))};
  } else if (ev.phase == affect::Phase::Enduring) {
    const auto pattern = behavior::select_pattern(profile_.dominance, behavior::Stance::Enduring);
    const double intensity = std::min(out.endurance_intensity * gain, 1.0);
    ev.command = MotionCommand{
        pattern, intensity,
        std::make_shared<const behavior::Trajectory>(patterns_->generate_endurance(pattern, intensity))};
  }
  return ev;
}

void Simulator::set_profile(proxemics::RelationshipProfile profile) {
  profile.validate();
  profile_ = std::move(profile);
}

void Simulator::set_dominance(Dominance dominance) { profile_.dominance = dominance; }

void Simulator::reset() noexcept {
  const std::uint64_t frame = state_.frame;
  state_ = affect::AffectState{};
  state_.frame = frame;
}

// ---------------------------------------------------------------------------

namespace {

// Keeps the stream referenced by a SerialMockSource alive.
class OwningSerialSource final : public sensor::DistanceSource {
 public:
  explicit OwningSerialSource(std::unique_ptr<std::istream> in)
      : in_(std::move(in)), source_(*in_) {}
  std::optional<sensor::DistanceSample> next() override { return source_.next(); }

 private:
  std::unique_ptr<std::istream> in_;
  sensor::SerialMockSource source_;
};

class StdinSerialSource final : public sensor::DistanceSource {
 public:
  StdinSerialSource() : source_(std::cin) {}
  std::optional<sensor::DistanceSample> next() override { return source_.next(); }

 private:
  sensor::SerialMockSource source_;
};

}  // namespace

std::unique_ptr<sensor::DistanceSource> open_source(const ScenarioConfig& config) {
  if (const auto* synth = std::get_if<sensor::SyntheticParams>(&config.source)) {
    if (!config.max_frames) throw ConfigError("synthetic sources need a frame count");
    return std::make_unique<sensor::SequenceSource>(sensor::synthetic(*synth, *config.max_frames));
  }
  if (const auto* trace = std::get_if<sensor::TraceSpec>(&config.source)) {
    return std::make_unique<sensor::SequenceSource>(
        sensor::read_trace(trace->path, config.frame_period_ms));
  }
  const auto& serial = std::get<sensor::SerialSpec>(config.source);
  if (serial.path == "-") return std::make_unique<StdinSerialSource>();
  auto in = std::make_unique<std::ifstream>(serial.path);
  if (!*in) throw ConfigError("cannot open serial stream " + serial.path.string());
  return std::make_unique<OwningSerialSource>(std::move(in));
}

RunResult run(const ScenarioConfig& config, affect::AffectState initial) {
  config.validate();
  const auto source = open_source(config);
  return run(config, *source, initial);
}

RunResult run(const ScenarioConfig& config, sensor::DistanceSource& source,
              affect::AffectState initial) {
  config.validate();
  Simulator sim(config.resolved_profile(), config.policy, config.patterns, initial);
  RunResult result;
  if (config.max_frames) result.events.reserve(*config.max_frames);

  while (!config.max_frames || result.events.size() < *config.max_frames) {
    std::optional<sensor::DistanceSample> sample;
    try {
      sample = source.next();
      if (!sample) break;
      result.events.push_back(sim.tick(sample->raw_cm));
    } catch (const Error& e) {
      throw Error("frame " + std::to_string(sim.state().frame + 1) + ": " + e.what());
    }
  }
  result.final_state = sim.state();
  return result;
}

RunSummary summarize(std::span<const TickEvent> events) {
  RunSummary s;
  s.frames = events.size();
  for (const TickEvent& ev : events) {
    s.max_level = std::max(s.max_level, ev.level);
    if (ev.avoidance) {
      if (!s.first_crossing) s.first_crossing = ev.frame;
      s.avoidance_frames.push_back(ev.frame);
    }
  }
  s.avoidance_count = s.avoidance_frames.size();
  return s;
}

}  // namespace aversion::engine
