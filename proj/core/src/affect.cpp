#include "aversion/affect.hpp"

#include <algorithm>
#include <cmath>

#include "aversion/error.hpp"

namespace aversion::affect {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Idle: return "idle";
    case Phase::Enduring: return "enduring";
    case Phase::Avoiding: return "avoiding";
  }
  return "unknown";
}

bool is_consistent(const AffectState& s) noexcept {
  if (!(s.accumulated >= 0.0)) return false;
  const bool idle = s.phase == Phase::Idle;
  if (idle != (s.accumulated == 0.0 && s.refractory_remaining == 0)) return false;
  if (s.avoidance_latched && !(s.phase == Phase::Avoiding || s.refractory_remaining > 0)) {
    return false;
  }
  return true;
}

void Policy::validate() const {
  if (refractory_frames == 0) throw ValidationError("refractory_frames must be at least 1");
  if (!std::isfinite(idle_epsilon) || idle_epsilon < 0.0) {
    throw ValidationError("idle_epsilon must be finite and non-negative");
  }
}

StepOutput step(const AffectState& state, double momentary,
                const proxemics::RelationshipProfile& profile, const Policy& policy) {
  if (!std::isfinite(momentary) || momentary < 0.0) {
    throw ValidationError("momentary dislike must be finite and non-negative");
  }

  StepOutput out;
  AffectState& next = out.state;
  next = state;
  next.frame = state.frame + 1;

  // Accumulation is suspended while the avoidance action plays out.
  if (state.refractory_remaining > 0) {
    next.refractory_remaining = state.refractory_remaining - 1;
    if (next.refractory_remaining == 0) next.avoidance_latched = false;
    if (next.avoidance_latched) {
      next.phase = Phase::Avoiding;
    } else {
      next.phase = next.accumulated > 0.0 ? Phase::Enduring : Phase::Idle;
    }
    out.level = next.accumulated;
    out.endurance_intensity =
        next.phase == Phase::Enduring ? std::min(next.accumulated / profile.tolerance, 1.0) : 0.0;
    return out;
  }

  next.avoidance_latched = false;
  double level = accumulate(state.accumulated, momentary, profile.decay);
  if (momentary == 0.0 && level < policy.idle_epsilon) level = 0.0;
  out.level = level;

  if (level > profile.tolerance) {
    out.avoidance = AvoidanceTrigger{std::min(level / profile.max_admissible, 1.0)};
    next.accumulated = 0.0;
    next.avoidance_latched = true;
    next.refractory_remaining = policy.refractory_frames;
    next.phase = Phase::Avoiding;
    out.endurance_intensity = 0.0;
    return out;
  }

  next.accumulated = level;
  next.phase = level > 0.0 ? Phase::Enduring : Phase::Idle;
  out.endurance_intensity = std::min(level / profile.tolerance, 1.0);
  return out;
}

double closed_form_level(double momentary, double decay, std::uint64_t frame) {
  if (!std::isfinite(momentary) || momentary < 0.0) {
    throw ValidationError("momentary dislike must be finite and non-negative");
  }
  if (!std::isfinite(decay) || decay < 0.0 || decay > 1.0) {
    throw ValidationError("decay must lie in [0, 1]");
  }
  if (frame == 0) throw ValidationError("frames are numbered from 1");
  const double t = static_cast<double>(frame);
  if (decay == 1.0) return momentary * t;
  if (decay == 0.0) return momentary;
  // 1 - c^t computed as -expm1(t ln c) keeps full precision for c near 1.
  return momentary * -std::expm1(t * std::log(decay)) / (1.0 - decay);
}

std::optional<std::uint64_t> first_crossing_frame(double momentary, double decay,
                                                  double threshold) {
  if (!(momentary > 0.0)) return std::nullopt;
  if (decay == 1.0) {
    return static_cast<std::uint64_t>(std::floor(threshold / momentary)) + 1;
  }
  if (momentary / (1.0 - decay) <= threshold) return std::nullopt;
  if (momentary > threshold) return 1;

  // Solve n (1 - c^t) / (1 - c) = e_th for t, then settle the boundary exactly.
  const double ratio = 1.0 - threshold * (1.0 - decay) / momentary;
  double estimate = std::ceil(std::log(ratio) / std::log(decay));
  if (!std::isfinite(estimate) || estimate < 1.0) estimate = 1.0;
  auto t = static_cast<std::uint64_t>(estimate);
  while (t > 1 && closed_form_level(momentary, decay, t - 1) > threshold) --t;
  while (closed_form_level(momentary, decay, t) <= threshold) ++t;
  return t;
}

}  // namespace aversion::affect
