#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aversion/affect.hpp"
#include "aversion/behavior.hpp"
#include "aversion/proxemics.hpp"
#include "aversion/sensor.hpp"

namespace aversion::engine {

/// Everything needed to run one scenario.
struct ScenarioConfig {
  proxemics::ProfileSet profiles = proxemics::default_profiles();
  Relationship relationship = Relationship::Friend;
  /// Replaces the profile's own dominance when set.
  std::optional<Dominance> dominance;
  sensor::SourceSpec source = sensor::SyntheticParams{sensor::Constant{proxemics::kOutOfRangeCm}};
  std::uint32_t frame_period_ms = sensor::kDefaultFramePeriodMs;
  affect::Policy policy;
  std::optional<std::uint64_t> max_frames;
  std::shared_ptr<const behavior::PatternLibrary> patterns = behavior::PatternLibrary::defaults();

  /// The selected profile with the dominance override applied.
  /// Throws ConfigError if the relationship has no profile.
  proxemics::RelationshipProfile resolved_profile() const;

  /// Checks profile invariants, policy, frame period and that synthetic
  /// sources are bounded by max_frames. Throws ConfigError / ValidationError.
  void validate() const;
};

/// Motion the arm is asked to perform this frame.
struct MotionCommand {
  behavior::PatternKind pattern = behavior::PatternKind::DeepBreathing;
  double intensity = 0.0;
  std::shared_ptr<const behavior::Trajectory> trajectory;
};

struct AvoidanceRecord {
  behavior::PatternKind pattern;
  double intensity;

  friend bool operator==(const AvoidanceRecord&, const AvoidanceRecord&) = default;
};

/// One engine frame.
struct TickEvent {
  std::uint64_t frame = 0;
  double raw_distance_cm = 0.0;
  double distance_cm = 0.0;
  double momentary = 0.0;
  double level = 0.0;  // s_t
  affect::Phase phase = affect::Phase::Idle;
  double endurance_intensity = 0.0;
  std::optional<AvoidanceRecord> avoidance;
  std::optional<MotionCommand> command;
};

/// The model fields of two events agree exactly (commands are compared by
/// pattern and intensity, not trajectory identity).
bool same_fields(const TickEvent& a, const TickEvent& b) noexcept;

/// Single-owner engine core: clamp -> momentary dislike -> affect step ->
/// motion command.
class Simulator {
 public:
  Simulator(proxemics::RelationshipProfile profile, affect::Policy policy,
            std::shared_ptr<const behavior::PatternLibrary> patterns,
            affect::AffectState initial = {});

  /// Advances one frame. Throws ValidationError for a non-finite reading.
  TickEvent tick(double raw_distance_cm);

  /// Switches thresholds and curve from the next tick; the accumulated
  /// level carries over.
  void set_profile(proxemics::RelationshipProfile profile);
  void set_dominance(Dominance dominance);
  /// Clears the accumulator, latch and refractory count; the frame counter continues.
  void reset() noexcept;

  const affect::AffectState& state() const noexcept { return state_; }
  const proxemics::RelationshipProfile& profile() const noexcept { return profile_; }
  const affect::Policy& policy() const noexcept { return policy_; }

 private:
  proxemics::RelationshipProfile profile_;
  affect::Policy policy_;
  std::shared_ptr<const behavior::PatternLibrary> patterns_;
  affect::AffectState state_;
};

struct RunResult {
  std::vector<TickEvent> events;
  affect::AffectState final_state;
};

/// Opens the configured source. Synthetic sources need max_frames.
std::unique_ptr<sensor::DistanceSource> open_source(const ScenarioConfig& config);

/// Runs until the source is exhausted or max_frames is reached.
/// Source errors are rethrown as Error with the frame number prepended.
RunResult run(const ScenarioConfig& config, affect::AffectState initial = {});
RunResult run(const ScenarioConfig& config, sensor::DistanceSource& source,
              affect::AffectState initial = {});

struct RunSummary {
  std::uint64_t frames = 0;
  std::optional<std::uint64_t> first_crossing;
  double max_level = 0.0;
  std::size_t avoidance_count = 0;
  std::vector<std::uint64_t> avoidance_frames;
};

RunSummary summarize(std::span<const TickEvent> events);

}  // namespace aversion::engine
