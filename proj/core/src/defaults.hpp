#pragma once

#include <string_view>

namespace aversion::detail {

// Contents of data/profiles.json and data/patterns.json, embedded at configure time.
extern const std::string_view kDefaultProfilesJson;
extern const std::string_view kDefaultPatternsJson;

}  // namespace aversion::detail
