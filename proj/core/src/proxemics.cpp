#include "aversion/proxemics.hpp"

#include <cmath>
#include <sstream>

#include "aversion/error.hpp"

namespace aversion::proxemics {

DislikeCurve::DislikeCurve(double amplitude, double rate_per_cm)
    : amplitude_(amplitude), rate_(rate_per_cm) {
  if (!std::isfinite(amplitude) || amplitude <= 0.0) {
    throw ValidationError("dislike curve amplitude must be positive and finite");
  }
  if (!std::isfinite(rate_per_cm) || rate_per_cm >= 0.0) {
    throw ValidationError("dislike curve rate must be negative and finite");
  }
}

double DislikeCurve::operator()(double distance_cm) const noexcept {
  return amplitude_ * std::exp(rate_ * distance_cm);
}

void RelationshipProfile::validate() const {
  const auto fail = [this](const std::string& what) {
    throw ValidationError(std::string(to_string(label)) + " profile: " + what);
  };
  if (!std::isfinite(decay) || decay < 0.0 || decay > 1.0) fail("c must lie in [0, 1]");
  if (!std::isfinite(tolerance) || tolerance <= 0.0) fail("e_th must be positive");
  if (!std::isfinite(max_admissible) || max_admissible < tolerance) {
    fail("e_max must be at least e_th");
  }
  if (!std::isfinite(activation_radius_cm) || activation_radius_cm <= 0.0) {
    fail("activation_radius_cm must be positive");
  }
  if (!std::isfinite(motion_gain) || motion_gain <= 0.0) fail("motion_gain must be positive");
}

void apply_override(RelationshipProfile& profile, std::string_view field, double value) {
  RelationshipProfile next = profile;
  if (field == "a") {
    next.curve = DislikeCurve(value, next.curve.rate_per_cm());
  } else if (field == "b") {
    next.curve = DislikeCurve(next.curve.amplitude(), value);
  } else if (field == "c") {
    next.decay = value;
  } else if (field == "e_th") {
    next.tolerance = value;
  } else if (field == "e_max") {
    next.max_admissible = value;
  } else if (field == "activation_radius_cm") {
    next.activation_radius_cm = value;
  } else if (field == "motion_gain") {
    next.motion_gain = value;
  } else {
    throw ValidationError("unknown profile field '" + std::string(field) + "'");
  }
  next.validate();
  profile = next;
}

double clamp_distance(double raw_cm) {
  if (!std::isfinite(raw_cm)) throw ValidationError("distance reading is not finite");
  if (raw_cm < kSensorNearLimitCm) return 0.0;
  if (raw_cm > kSensorFarLimitCm) return kOutOfRangeCm;
  return raw_cm;
}

double momentary_dislike(const RelationshipProfile& profile, double distance_cm) noexcept {
  if (distance_cm >= profile.activation_radius_cm) return 0.0;
  return profile.curve(distance_cm);
}

void HallZones::validate() const {
  const ZoneBounds zones[] = {intimate, personal, social, public_zone};
  if (intimate.near_cm != 0.0) throw ValidationError("intimate zone must start at 0 cm");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(zones[i].far_cm > zones[i].near_cm)) {
      throw ValidationError("zone bounds must be strictly increasing");
    }
    if (i > 0 && zones[i].near_cm != zones[i - 1].far_cm) {
      throw ValidationError("zones must be contiguous");
    }
  }
}

Zone HallZones::zone_of(double distance_cm) const {
  if (distance_cm < intimate.far_cm) return Zone::Intimate;
  if (distance_cm < personal.far_cm) return Zone::Personal;
  if (distance_cm < social.far_cm) return Zone::Social;
  return Zone::Public;
}

std::string_view to_string(Zone zone) noexcept {
  switch (zone) {
    case Zone::Intimate: return "intimate";
    case Zone::Personal: return "personal";
    case Zone::Social: return "social";
    case Zone::Public: return "public";
  }
  return "unknown";
}

}  // namespace aversion::proxemics
