#include "aversion/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace aversion {

namespace {

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

std::string_view to_string(Relationship r) noexcept {
  switch (r) {
    case Relationship::Stranger: return "stranger";
    case Relationship::Acquaintance: return "acquaintance";
    case Relationship::Friend: return "friend";
    case Relationship::Partner: return "partner";
  }
  return "unknown";
}

std::string_view to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::Low: return "low";
    case Dominance::Medium: return "medium";
    case Dominance::High: return "high";
  }
  return "unknown";
}

std::optional<Relationship> parse_relationship(std::string_view text) noexcept {
  const std::string key = lowered(text);
  for (Relationship r : kAllRelationships) {
    if (key == to_string(r)) return r;
  }
  return std::nullopt;
}

std::optional<Dominance> parse_dominance(std::string_view text) noexcept {
  const std::string key = lowered(text);
  for (Dominance d : kAllDominanceLevels) {
    if (key == to_string(d)) return d;
  }
  return std::nullopt;
}

}  // namespace aversion
