#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "aversion/types.hpp"

namespace aversion::behavior {

enum class PatternKind { Slumping, DeepBreathing, Jitter, Escape, PushAway, Strike };
enum class Category { Endurance, Avoidance };

inline constexpr std::array<PatternKind, 6> kAllPatterns = {
    PatternKind::Slumping, PatternKind::DeepBreathing, PatternKind::Jitter,
    PatternKind::Escape,   PatternKind::PushAway,      PatternKind::Strike};

/// The stance a motion is requested for.
enum class Stance { Enduring, Avoiding };

/// Config names: "slumping", "deep_breathing", "jitter", "escape", "push_away", "strike".
std::string_view to_string(PatternKind kind) noexcept;
std::string_view to_string(Category category) noexcept;
std::optional<PatternKind> parse_pattern(std::string_view text) noexcept;

constexpr Category category_of(PatternKind kind) noexcept {
  switch (kind) {
    case PatternKind::Slumping:
    case PatternKind::DeepBreathing:
    case PatternKind::Jitter:
      return Category::Endurance;
    case PatternKind::Escape:
    case PatternKind::PushAway:
    case PatternKind::Strike:
      return Category::Avoidance;
  }
  return Category::Endurance;
}

/// Motion repertoire by Dominance:
///
///   Dominance | Enduring       | Avoiding
///   ----------+----------------+----------
///   Low       | Slumping       | Escape
///   Medium    | DeepBreathing  | PushAway
///   High      | Jitter         | Strike
constexpr PatternKind select_pattern(Dominance dominance, Stance stance) noexcept {
  const bool avoid = stance == Stance::Avoiding;
  switch (dominance) {
    case Dominance::Low: return avoid ? PatternKind::Escape : PatternKind::Slumping;
    case Dominance::Medium: return avoid ? PatternKind::PushAway : PatternKind::DeepBreathing;
    case Dominance::High: return avoid ? PatternKind::Strike : PatternKind::Jitter;
  }
  return PatternKind::DeepBreathing;
}

/// Joint angles of the abstract 6-DOF arm, degrees. Index 0 is base yaw,
/// 1..3 are shoulder/elbow/wrist pitch (positive leans toward the user),
/// 4..5 are wrist yaw and flange roll.
using JointAngles = std::array<double, 6>;

/// Endurance keyframes belong to the looping segment; avoidance keyframes
/// are split into a reaction segment followed by a return segment.
enum class Segment { Loop, React, Return };

struct Keyframe {
  JointAngles angles{};
  std::int64_t t_ms = 0;
  Segment segment = Segment::Loop;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

struct Trajectory {
  PatternKind pattern = PatternKind::DeepBreathing;
  std::vector<Keyframe> keyframes;
  bool loops = false;
  /// Loop period for looping trajectories (wraps back to the first
  /// keyframe); equals the last keyframe time otherwise.
  std::int64_t period_ms = 0;

  std::int64_t duration_ms() const noexcept;
};

/// Piecewise-linear pose at time t. Looping trajectories wrap with their
/// period; one-shot trajectories hold the last pose.
JointAngles sample(const Trajectory& trajectory, std::int64_t t_ms);

struct JointLimits {
  JointAngles lower{};
  JointAngles upper{};

  static JointLimits symmetric(double limit_deg);
  bool contains(const JointAngles& pose) const noexcept;
};

/// Horizontal reach of the wrist toward the user (mm) from planar forward
/// kinematics of the pitch chain, projected through the base yaw. Smaller
/// means the arm is further withdrawn from the user-facing direction.
double reach_toward_user(const JointAngles& pose) noexcept;

/// One pattern as stored in the pattern-definition file.
///
/// Endurance keyframe angles are normalized offsets from neutral in
/// [-1, 1]; the generated pose is neutral + base_amplitude * intensity *
/// offset. Avoidance keyframe angles are absolute poses.
struct PatternDefinition {
  PatternKind kind = PatternKind::DeepBreathing;
  double base_amplitude_deg = 0.0;
  std::vector<Keyframe> keyframes;
  bool loops = false;
  std::int64_t period_ms = 0;
};

/// The six motion patterns plus the neutral pose and joint limits,
/// validated at load and immutable afterwards.
class PatternLibrary {
 public:
  /// Parses the pattern-definition JSON. Throws ConfigError for schema
  /// problems and ValidationError when a pose leaves the joint limits.
  static PatternLibrary parse(std::string_view json_text);
  static PatternLibrary load(const std::filesystem::path& path);
  /// Compiled-in data/patterns.json.
  static std::shared_ptr<const PatternLibrary> defaults();

  const JointAngles& neutral() const noexcept { return neutral_; }
  const JointLimits& limits() const noexcept { return limits_; }
  const PatternDefinition& definition(PatternKind kind) const;

  /// Looping trajectory with deviation from neutral scaled by intensity in [0, 1].
  /// Throws CategoryError for avoidance patterns, ValidationError for bad intensity.
  Trajectory generate_endurance(PatternKind kind, double intensity) const;

  /// Two-segment one-shot trajectory; keyframe times are divided by
  /// max(intensity, 0.1), poses are unchanged. Intensity must lie in (0, 1].
  /// Throws CategoryError for endurance patterns, ValidationError for bad intensity.
  Trajectory generate_avoidance(PatternKind kind, double intensity) const;

 private:
  JointAngles neutral_{};
  JointLimits limits_{};
  std::map<PatternKind, PatternDefinition> patterns_;
};

inline constexpr double kDefaultJointLimitDeg = 165.0;
inline constexpr double kMinAvoidanceSpeed = 0.1;

}  // namespace aversion::behavior
