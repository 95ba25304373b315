#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "aversion/proxemics.hpp"

namespace aversion::affect {

enum class Phase { Idle, Enduring, Avoiding };

std::string_view to_string(Phase phase) noexcept;

/// Accumulator state. Frames are numbered from 1; a fresh state is frame 0
/// with nothing accumulated.
///
/// Invariants: accumulated >= 0; phase == Idle iff accumulated == 0 and
/// refractory_remaining == 0; avoidance_latched implies phase == Avoiding or
/// refractory_remaining > 0.
struct AffectState {
  std::uint64_t frame = 0;
  double accumulated = 0.0;
  Phase phase = Phase::Idle;
  bool avoidance_latched = false;
  std::uint32_t refractory_remaining = 0;

  friend bool operator==(const AffectState&, const AffectState&) = default;
};

bool is_consistent(const AffectState& state) noexcept;

/// What happens after an avoidance fires. The accumulator is reset to zero
/// and stays suspended for refractory_frames frames.
struct Policy {
  std::uint32_t refractory_frames = 10;
  double idle_epsilon = 1e-4;

  /// refractory_frames >= 1, idle_epsilon finite and >= 0.
  void validate() const;
};

struct AvoidanceTrigger {
  double intensity;  // in (0, 1]
};

struct StepOutput {
  AffectState state;
  /// s_t for this frame. On a trigger frame this is the value that crossed
  /// the threshold; state.accumulated has already been reset.
  double level = 0.0;
  /// min(state.accumulated / e_th, 1); zero while avoiding.
  double endurance_intensity = 0.0;
  std::optional<AvoidanceTrigger> avoidance;
};

/// One leaky-integrator update: s_t = n_t + c * s_{t-1}.
constexpr double accumulate(double previous, double momentary, double decay) noexcept {
  return momentary + previous * decay;
}

/// Advances the state by one frame with momentary dislike n_t.
/// Throws ValidationError when n_t is negative or not finite.
StepOutput step(const AffectState& state, double momentary,
                const proxemics::RelationshipProfile& profile, const Policy& policy = {});

/// s_t for constant n starting from s_0 = 0: n (1 - c^t) / (1 - c), or n t
/// when c == 1. Throws ValidationError for n < 0, c outside [0, 1] or t == 0.
double closed_form_level(double momentary, double decay, std::uint64_t frame);

/// Smallest t with closed_form_level(n, c, t) > threshold, or nullopt when
/// the series saturates at or below the threshold.
std::optional<std::uint64_t> first_crossing_frame(double momentary, double decay, double threshold);

}  // namespace aversion::affect
