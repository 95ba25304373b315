#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aversion/engine.hpp"

namespace aversion::cli {

/// Entry point shared by main() and the tests. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One golden scenario: hold the hand at a fixed distance and expect the
/// first avoidance at a given frame (or never).
struct GoldenCase {
  const char* name;
  Relationship relationship;
  double distance_cm;
  std::optional<std::uint64_t> expected_crossing;
};

/// Friend at 30/10 cm, acquaintance at 30/20/10 cm.
const std::array<GoldenCase, 5>& golden_cases();

struct GoldenResult {
  GoldenCase scenario;
  double momentary = 0.0;
  std::optional<std::uint64_t> observed_crossing;
  double max_level = 0.0;
  bool pass = false;
};

/// Runs every golden case through the engine with the given base config
/// (profiles, overrides, policy); relationship and source are replaced per case.
std::vector<GoldenResult> run_golden_checks(const engine::ScenarioConfig& base,
                                            std::uint64_t frames = 200);

}  // namespace aversion::cli
