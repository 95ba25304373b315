#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "aversion/types.hpp"

namespace aversion::proxemics {

/// Sensor range limits of the ultrasonic ranger. Readings below the near
/// limit become 0 cm; readings above the far limit become the
/// out-of-range marker.
inline constexpr double kSensorNearLimitCm = 2.0;
inline constexpr double kSensorFarLimitCm = 450.0;
inline constexpr double kOutOfRangeCm = 700.0;

/// Momentary dislike as a function of distance: n(d) = amplitude * exp(rate * d).
///
/// amplitude > 0 and rate < 0 (1/cm), so n is strictly decreasing in d.
class DislikeCurve {
 public:
  /// Throws ValidationError unless amplitude > 0 and rate_per_cm < 0 (both finite).
  DislikeCurve(double amplitude, double rate_per_cm);

  double amplitude() const noexcept { return amplitude_; }
  double rate_per_cm() const noexcept { return rate_; }

  double operator()(double distance_cm) const noexcept;

  friend bool operator==(const DislikeCurve&, const DislikeCurve&) = default;

 private:
  double amplitude_;
  double rate_;
};

/// Model constants for one relationship.
struct RelationshipProfile {
  Relationship label = Relationship::Friend;
  DislikeCurve curve{1.0, -0.01};
  double decay = 0.7;                 // c, in [0, 1]
  double tolerance = 1.0;             // e_th
  double max_admissible = 1.0;        // e_max, >= tolerance
  double activation_radius_cm = 45.0; // n = 0 at or beyond this distance
  Dominance dominance = Dominance::Medium;
  double motion_gain = 1.0;           // multiplies motion intensities, > 0

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const RelationshipProfile&, const RelationshipProfile&) = default;
};

using ProfileSet = std::map<Relationship, RelationshipProfile>;

/// Parses the profile config format: an object keyed by relationship label,
/// each value {a, b, c, e_th, e_max, activation_radius_cm, dominance[, motion_gain]}.
/// Throws ConfigError on malformed input, ValidationError on invariant violations.
ProfileSet parse_profiles(std::string_view json_text);
ProfileSet load_profiles(const std::filesystem::path& path);
std::string profiles_to_json(const ProfileSet& profiles);

/// The compiled-in default profile set (data/profiles.json).
const ProfileSet& default_profiles();

/// Replaces one scalar field of a profile by its config key ("a", "b", "c",
/// "e_th", "e_max", "activation_radius_cm", "motion_gain") and revalidates.
void apply_override(RelationshipProfile& profile, std::string_view field, double value);

/// Throws ValidationError for non-finite input; otherwise applies the sensor
/// clamping rule.
double clamp_distance(double raw_cm);

/// a * exp(b * d) inside the activation radius, 0 at or beyond it.
double momentary_dislike(const RelationshipProfile& profile, double distance_cm) noexcept;

// ---------------------------------------------------------------------------
// Hall zones

struct ZoneBounds {
  double near_cm;
  double far_cm;
};

enum class Zone { Intimate, Personal, Social, Public };

struct HallZones {
  ZoneBounds intimate{0.0, 45.0};
  ZoneBounds personal{45.0, 120.0};
  ZoneBounds social{120.0, 360.0};
  ZoneBounds public_zone{360.0, 750.0};

  /// Contiguous, strictly increasing, intimate.near == 0.
  void validate() const;
  /// Zone containing d (near inclusive, far exclusive); distances beyond the
  /// public far bound still report Public.
  Zone zone_of(double distance_cm) const;
};

std::string_view to_string(Zone zone) noexcept;

// ---------------------------------------------------------------------------
// Curve fitting

/// A point the curve should pass through.
struct Anchor {
  double distance_cm;
  double dislike;
};

/// Holding the hand at distance_cm with decay c must first push the
/// accumulator above threshold at exactly `frame` (frames counted from 1).
struct CrossingConstraint {
  double distance_cm;
  double decay;
  double threshold;
  int frame;
};

/// Range of constant momentary dislike that yields the constrained first
/// crossing: lower is exclusive, upper inclusive (infinite when frame == 1).
struct FeasibleInterval {
  double lower;
  double upper;
  bool empty() const noexcept { return !(upper > lower); }
};

FeasibleInterval crossing_interval(const CrossingConstraint& constraint);

/// Fits n(d) = a*exp(b*d).
///
/// With exactly two distinct anchor distances the fit is the closed-form
/// two-point log-linear solve; with more points it is least squares on
/// ln(n). A single anchor is completed by pseudo-anchors placed at the
/// midpoint of each constraint's feasible interval. Every constraint is then
/// checked by simulating the accumulator.
///
/// Throws ArityError when the data cannot determine two parameters and
/// FitError naming the offending constraint when one is infeasible or violated.
DislikeCurve fit_curve(std::span<const Anchor> anchors,
                       std::span<const CrossingConstraint> constraints = {});

}  // namespace aversion::proxemics
