#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "argnet/data/types.hpp"

namespace argnet::rationale {

inline constexpr std::string_view kRefusalPlaceholder = "no analysis available";

struct ParsedResponse {
    std::optional<data::Label> judgment;
    std::string rationale_text;
    data::ParseStatus status = data::ParseStatus::Ambiguous;
};

/// Position of the last 0/1 that stands alone (not part of a longer number
/// or word), or npos.
std::size_t last_verdict_position(std::string_view text) noexcept;

/// The last standalone 0/1 wins: 1 means real, 0 means fake. No verdict gives
/// REFUSAL when the text reads like a refusal, AMBIGUOUS otherwise.
ParsedResponse parse_judgment(std::string_view response);

}  // namespace argnet::rationale
