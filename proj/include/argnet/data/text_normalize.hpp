#pragma once

#include <string>
#include <string_view>

namespace argnet::data {

/// Canonical form used for duplicate detection: NFC, trimmed, internal
/// whitespace runs collapsed to one space, Latin-script letters case-folded.
std::string normalize_for_dedup(std::string_view utf8);

}  // namespace argnet::data
