#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "aversion/affect.hpp"
#include "aversion/error.hpp"
#include "aversion/proxemics.hpp"

namespace aversion::proxemics {

namespace {

// Pseudo-target used when a constraint's interval is unbounded above.
constexpr double kUnboundedTargetFactor = 1.5;

// Longest run the verification simulation will try before declaring "never".
constexpr int kSimulationHorizon = 100000;

std::string describe(const CrossingConstraint& c, std::size_t index) {
  std::ostringstream os;
  os << "crossing constraint #" << index << " (d=" << c.distance_cm << " cm, c=" << c.decay
     << ", e_th=" << c.threshold << ", t*=" << c.frame << ")";
  return os.str();
}

void check_constraint_domain(const CrossingConstraint& c) {
  if (!std::isfinite(c.distance_cm) || c.distance_cm < 0.0) {
    throw ValidationError("constraint distance must be finite and non-negative");
  }
  if (!std::isfinite(c.decay) || c.decay < 0.0 || c.decay > 1.0) {
    throw ValidationError("constraint decay must lie in [0, 1]");
  }
  if (!std::isfinite(c.threshold) || c.threshold <= 0.0) {
    throw ValidationError("constraint threshold must be positive");
  }
  if (c.frame < 1) throw ValidationError("constraint frame must be at least 1");
}

// Sum_{k<t} c^k: the accumulator level after t frames of unit input.
double unit_gain(double decay, int frames) {
  double level = 0.0;
  for (int i = 0; i < frames; ++i) level = affect::accumulate(level, 1.0, decay);
  return level;
}

// First frame the iterated accumulator exceeds the threshold, 0 if never.
int simulate_first_crossing(double momentary, double decay, double threshold) {
  double level = 0.0;
  for (int t = 1; t <= kSimulationHorizon; ++t) {
    level = affect::accumulate(level, momentary, decay);
    if (level > threshold) return t;
  }
  return 0;
}

struct Point {
  double distance;
  double log_dislike;
};

}  // namespace

FeasibleInterval crossing_interval(const CrossingConstraint& constraint) {
  check_constraint_domain(constraint);
  const double at = unit_gain(constraint.decay, constraint.frame);
  const double before = unit_gain(constraint.decay, constraint.frame - 1);
  FeasibleInterval out;
  out.lower = constraint.threshold / at;
  out.upper = before > 0.0 ? constraint.threshold / before
                           : std::numeric_limits<double>::infinity();
  return out;
}

DislikeCurve fit_curve(std::span<const Anchor> anchors,
                       std::span<const CrossingConstraint> constraints) {
  for (const Anchor& a : anchors) {
    if (!std::isfinite(a.distance_cm) || a.distance_cm < 0.0) {
      throw ValidationError("anchor distance must be finite and non-negative");
    }
    if (!std::isfinite(a.dislike) || a.dislike <= 0.0) {
      throw ValidationError("anchor dislike must be positive (log-space fit)");
    }
  }
  if (anchors.empty()) throw ArityError("fit needs at least one anchor");

  std::vector<Point> points;
  points.reserve(anchors.size() + constraints.size());
  for (const Anchor& a : anchors) points.push_back({a.distance_cm, std::log(a.dislike)});

  const auto distinct_distances = [&points] {
    std::vector<double> seen;
    for (const Point& p : points) {
      bool dup = false;
      for (double d : seen) dup = dup || d == p.distance;
      if (!dup) seen.push_back(p.distance);
    }
    return seen.size();
  };

  std::vector<FeasibleInterval> intervals;
  intervals.reserve(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const FeasibleInterval iv = crossing_interval(constraints[i]);
    if (iv.empty()) {
      throw FitError(describe(constraints[i], i) + " is infeasible: no constant input crosses first at that frame");
    }
    intervals.push_back(iv);
  }

  if (distinct_distances() < 2) {
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const FeasibleInterval& iv = intervals[i];
      const double target = std::isinf(iv.upper) ? iv.lower * kUnboundedTargetFactor
                                                  : 0.5 * (iv.lower + iv.upper);
      points.push_back({constraints[i].distance_cm, std::log(target)});
    }
    if (distinct_distances() < 2) {
      throw ArityError("fit needs two distinct distances (anchors or constrained distances)");
    }
  }

  double rate = 0.0;
  double log_amplitude = 0.0;
  if (points.size() == 2) {
    const Point& p = points[0];
    const Point& q = points[1];
    rate = (p.log_dislike - q.log_dislike) / (p.distance - q.distance);
    log_amplitude = p.log_dislike - rate * p.distance;
  } else {
    double mean_d = 0.0;
    double mean_y = 0.0;
    for (const Point& p : points) {
      mean_d += p.distance;
      mean_y += p.log_dislike;
    }
    mean_d /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    double sdd = 0.0;
    double sdy = 0.0;
    for (const Point& p : points) {
      sdd += (p.distance - mean_d) * (p.distance - mean_d);
      sdy += (p.distance - mean_d) * (p.log_dislike - mean_y);
    }
    rate = sdy / sdd;
    log_amplitude = mean_y - rate * mean_d;
  }

  if (!(rate < 0.0)) {
    std::ostringstream os;
    os << "fitted rate b=" << rate << " is not negative; dislike must fall with distance";
    throw FitError(os.str());
  }
  const DislikeCurve curve(std::exp(log_amplitude), rate);

  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const CrossingConstraint& c = constraints[i];
    const int t = simulate_first_crossing(curve(c.distance_cm), c.decay, c.threshold);
    if (t != c.frame) {
      std::ostringstream os;
      os << describe(c, i) << " violated: fitted curve gives n=" << curve(c.distance_cm)
         << ", first crossing " << (t ? "at t=" + std::to_string(t) : std::string("never"));
      throw FitError(os.str());
    }
  }
  return curve;
}

}  // namespace aversion::proxemics
