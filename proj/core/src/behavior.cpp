#include "aversion/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aversion/error.hpp"
#include "defaults.hpp"

namespace aversion::behavior {

using nlohmann::json;

std::string_view to_string(PatternKind kind) noexcept {
  switch (kind) {
    case PatternKind::Slumping: return "slumping";
    case PatternKind::DeepBreathing: return "deep_breathing";
    case PatternKind::Jitter: return "jitter";
    case PatternKind::Escape: return "escape";
    case PatternKind::PushAway: return "push_away";
    case PatternKind::Strike: return "strike";
  }
  return "unknown";
}

std::string_view to_string(Category category) noexcept {
  return category == Category::Endurance ? "endurance" : "avoidance";
}

std::optional<PatternKind> parse_pattern(std::string_view text) noexcept {
  for (PatternKind k : kAllPatterns) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::int64_t Trajectory::duration_ms() const noexcept {
  if (loops) return period_ms;
  return keyframes.empty() ? 0 : keyframes.back().t_ms;
}

JointAngles sample(const Trajectory& trajectory, std::int64_t t_ms) {
  const auto& kf = trajectory.keyframes;
  if (kf.empty()) throw ValidationError("cannot sample an empty trajectory");
  if (kf.size() == 1) return kf.front().angles;

  if (trajectory.loops) {
    const std::int64_t period = trajectory.period_ms;
    t_ms %= period;
    if (t_ms < 0) t_ms += period;
  }
  if (t_ms <= kf.front().t_ms) return kf.front().angles;

  // Segment [i, i+1]; for loops the final segment wraps back to keyframe 0.
  for (std::size_t i = 0; i < kf.size(); ++i) {
    const bool last = i + 1 == kf.size();
    if (last && !trajectory.loops) return kf.back().angles;
    const Keyframe& a = kf[i];
    const Keyframe& b = last ? kf.front() : kf[i + 1];
    const std::int64_t end = last ? trajectory.period_ms : b.t_ms;
    if (t_ms <= end) {
      const double u = static_cast<double>(t_ms - a.t_ms) / static_cast<double>(end - a.t_ms);
      JointAngles out{};
      for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = a.angles[j] + u * (b.angles[j] - a.angles[j]);
      }
      return out;
    }
  }
  return kf.back().angles;
}

JointLimits JointLimits::symmetric(double limit_deg) {
  if (!std::isfinite(limit_deg) || limit_deg <= 0.0) {
    throw ValidationError("joint limit must be positive");
  }
  JointLimits out;
  out.lower.fill(-limit_deg);
  out.upper.fill(limit_deg);
  return out;
}

bool JointLimits::contains(const JointAngles& pose) const noexcept {
  for (std::size_t j = 0; j < pose.size(); ++j) {
    if (!(pose[j] >= lower[j] && pose[j] <= upper[j])) return false;
  }
  return true;
}

double reach_toward_user(const JointAngles& pose) noexcept {
  // Upper arm, forearm and wrist link lengths of a small tabletop arm (mm).
  constexpr double kLinks[3] = {110.0, 96.0, 66.0};
  constexpr double kDeg = std::numbers::pi / 180.0;
  double pitch = 0.0;
  double horizontal = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    pitch += pose[i + 1];
    horizontal += kLinks[i] * std::sin(pitch * kDeg);
  }
  return horizontal * std::cos(pose[0] * kDeg);
}

// ---------------------------------------------------------------------------

namespace {

JointAngles angles_from_json(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 6) throw ConfigError(where + ": expected 6 joint angles");
  JointAngles out{};
  for (std::size_t j = 0; j < 6; ++j) {
    if (!v[j].is_number()) throw ConfigError(where + ": joint angles must be numbers");
    out[j] = v[j].get<double>();
  }
  return out;
}

JointAngles offset_pose(const JointAngles& neutral, const JointAngles& offset, double scale) {
  JointAngles out{};
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = neutral[j] + scale * offset[j];
  return out;
}

PatternDefinition definition_from_json(PatternKind kind, const json& obj,
                                       const JointAngles& neutral, const JointLimits& limits) {
  const std::string where = "pattern '" + std::string(to_string(kind)) + "'";
  if (!obj.is_object()) throw ConfigError(where + " must be an object");

  const Category expected = category_of(kind);
  const std::string category = obj.value("category", "");
  if (category != to_string(expected)) {
    throw ConfigError(where + ": category must be '" + std::string(to_string(expected)) + "'");
  }

  PatternDefinition def;
  def.kind = kind;
  def.base_amplitude_deg = obj.value("base_amplitude_deg", 0.0);
  def.loops = obj.value("loops", expected == Category::Endurance);
  if (def.loops != (expected == Category::Endurance)) {
    throw ConfigError(where + ": endurance patterns loop, avoidance patterns do not");
  }
  if (!std::isfinite(def.base_amplitude_deg) || def.base_amplitude_deg < 0.0) {
    throw ConfigError(where + ": base_amplitude_deg must be non-negative");
  }

  const auto frames = obj.find("keyframes");
  if (frames == obj.end() || !frames->is_array() || frames->empty()) {
    throw ConfigError(where + ": keyframes must be a non-empty array");
  }
  for (const json& f : *frames) {
    Keyframe k;
    k.angles = angles_from_json(f.value("angles", json()), where);
    if (!f.contains("t_ms") || !f["t_ms"].is_number_integer()) {
      throw ConfigError(where + ": keyframe t_ms must be an integer");
    }
    k.t_ms = f["t_ms"].get<std::int64_t>();
    if (expected == Category::Endurance) {
      k.segment = Segment::Loop;
    } else {
      const std::string seg = f.value("phase", "");
      if (seg == "react") {
        k.segment = Segment::React;
      } else if (seg == "return") {
        k.segment = Segment::Return;
      } else {
        throw ConfigError(where + ": avoidance keyframes need phase 'react' or 'return'");
      }
    }
    def.keyframes.push_back(k);
  }

  if (def.keyframes.front().t_ms != 0) throw ConfigError(where + ": first keyframe must be at t_ms 0");
  for (std::size_t i = 1; i < def.keyframes.size(); ++i) {
    if (def.keyframes[i].t_ms <= def.keyframes[i - 1].t_ms) {
      throw ConfigError(where + ": keyframe times must be strictly increasing");
    }
  }

  if (expected == Category::Endurance) {
    def.period_ms = obj.value("period_ms", def.keyframes.back().t_ms);
    if (def.keyframes.size() > 1 && def.period_ms <= def.keyframes.back().t_ms) {
      throw ConfigError(where + ": period_ms must exceed the last keyframe time");
    }
    for (const Keyframe& k : def.keyframes) {
      for (double o : k.angles) {
        if (!(o >= -1.0 && o <= 1.0)) throw ConfigError(where + ": offsets must lie in [-1, 1]");
      }
      if (!limits.contains(offset_pose(neutral, k.angles, def.base_amplitude_deg))) {
        throw ValidationError(where + ": full-amplitude pose exceeds joint limits");
      }
    }
  } else {
    def.period_ms = def.keyframes.back().t_ms;
    // React segment first, then return; both non-empty.
    std::size_t i = 0;
    while (i < def.keyframes.size() && def.keyframes[i].segment == Segment::React) ++i;
    const std::size_t react_count = i;
    while (i < def.keyframes.size() && def.keyframes[i].segment == Segment::Return) ++i;
    if (react_count == 0 || react_count == def.keyframes.size() || i != def.keyframes.size()) {
      throw ConfigError(where + ": avoidance needs a react phase followed by a return phase");
    }
    for (const Keyframe& k : def.keyframes) {
      if (!limits.contains(k.angles)) throw ValidationError(where + ": pose exceeds joint limits");
    }
  }
  return def;
}

void require_intensity(double intensity, bool allow_zero) {
  const bool ok = std::isfinite(intensity) && intensity <= 1.0 &&
                  (allow_zero ? intensity >= 0.0 : intensity > 0.0);
  if (!ok) {
    throw ValidationError(allow_zero ? "endurance intensity must lie in [0, 1]"
                                     : "avoidance intensity must lie in (0, 1]");
  }
}

}  // namespace

PatternLibrary PatternLibrary::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("patterns: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("patterns: top level must be an object");

  PatternLibrary lib;
  lib.limits_ = JointLimits::symmetric(doc.value("joint_limit_deg", kDefaultJointLimitDeg));
  if (!doc.contains("neutral")) throw ConfigError("patterns: missing 'neutral' pose");
  lib.neutral_ = angles_from_json(doc["neutral"], "neutral");
  if (!lib.limits_.contains(lib.neutral_)) throw ValidationError("neutral pose exceeds joint limits");

  const auto patterns = doc.find("patterns");
  if (patterns == doc.end() || !patterns->is_object()) {
    throw ConfigError("patterns: missing 'patterns' object");
  }
  for (const auto& [name, value] : patterns->items()) {
    const auto kind = parse_pattern(name);
    if (!kind) throw ConfigError("patterns: unknown pattern '" + name + "'");
    lib.patterns_.emplace(*kind, definition_from_json(*kind, value, lib.neutral_, lib.limits_));
  }
  for (PatternKind k : kAllPatterns) {
    if (!lib.patterns_.count(k)) {
      throw ConfigError("patterns: missing definition for '" + std::string(to_string(k)) + "'");
    }
  }
  return lib;
}

PatternLibrary PatternLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pattern file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::shared_ptr<const PatternLibrary> PatternLibrary::defaults() {
  static const auto lib =
      std::make_shared<const PatternLibrary>(parse(detail::kDefaultPatternsJson));
  return lib;
}

const PatternDefinition& PatternLibrary::definition(PatternKind kind) const {
  return patterns_.at(kind);
}

Trajectory PatternLibrary::generate_endurance(PatternKind kind, double intensity) const {
  if (category_of(kind) != Category::Endurance) {
    throw CategoryError("'" + std::string(to_string(kind)) + "' is not an endurance pattern");
  }
  require_intensity(intensity, /*allow_zero=*/true);

  const PatternDefinition& def = definition(kind);
  Trajectory out;
  out.pattern = kind;
  out.loops = true;
  out.period_ms = def.period_ms;
  out.keyframes.reserve(def.keyframes.size());
  const double scale = def.base_amplitude_deg * intensity;
  for (const Keyframe& k : def.keyframes) {
    out.keyframes.push_back({offset_pose(neutral_, k.angles, scale), k.t_ms, Segment::Loop});
  }
  return out;
}

Trajectory PatternLibrary::generate_avoidance(PatternKind kind, double intensity) const {
  if (category_of(kind) != Category::Avoidance) {
    throw CategoryError("'" + std::string(to_string(kind)) + "' is not an avoidance pattern");
  }
  require_intensity(intensity, /*allow_zero=*/false);

  const PatternDefinition& def = definition(kind);
  const double stretch = 1.0 / std::max(intensity, kMinAvoidanceSpeed);
  Trajectory out;
  out.pattern = kind;
  out.loops = false;
  out.keyframes = def.keyframes;
  for (Keyframe& k : out.keyframes) {
    k.t_ms = std::llround(static_cast<double>(k.t_ms) * stretch);
  }
  out.period_ms = out.keyframes.back().t_ms;
  return out;
}

}  // namespace aversion::behavior
