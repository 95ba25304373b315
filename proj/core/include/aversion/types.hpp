#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace aversion {

/// Social relationship to the approaching person, selected before interaction.
enum class Relationship { Stranger, Acquaintance, Friend, Partner };

inline constexpr std::array<Relationship, 4> kAllRelationships = {
    Relationship::Stranger, Relationship::Acquaintance, Relationship::Friend,
    Relationship::Partner};

/// Discrete setting on the Dominance axis of the PAD affect space.
/// Ordered: Low < Medium < High.
enum class Dominance { Low, Medium, High };

inline constexpr std::array<Dominance, 3> kAllDominanceLevels = {
    Dominance::Low, Dominance::Medium, Dominance::High};

std::string_view to_string(Relationship r) noexcept;
std::string_view to_string(Dominance d) noexcept;

/// Lower-case names: "stranger", "acquaintance", "friend", "partner".
std::optional<Relationship> parse_relationship(std::string_view text) noexcept;
/// Accepts "low", "medium", "high" (any case).
std::optional<Dominance> parse_dominance(std::string_view text) noexcept;

}  // namespace aversion
