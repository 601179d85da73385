#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "argnet/data/types.hpp"

namespace argnet::data {

/// Token appended to a synthetic rationale whenever its LLM judgment is FAKE.
inline constexpr std::string_view kSyntheticFakeCue = "fabricated";

struct SyntheticOptions {
    int news_vocab = 300;
    int rationale_vocab = 200;
    int news_min_tokens = 12;
    int news_max_tokens = 24;
    int rationale_min_tokens = 8;
    int rationale_max_tokens = 16;
    std::int64_t base_timestamp = 1'600'000'000;
    /// When set, each news text also carries one marker token per perspective
    /// telling whether that perspective's LLM judgment is correct. Markers are
    /// independent of the gold label, so news stays label-uninformative, but
    /// rationale usefulness becomes predictable from (news, rationale).
    bool reliability_markers = false;
};

/// Planted-signal corpus: label-uninformative news, rationales whose cue token
/// follows the (possibly wrong) LLM judgment, judgments correct with
/// probability p_td / p_cs independently per sample. Deterministic in `seed`.
std::vector<EnrichedSample> generate_synthetic_corpus(std::size_t n, double p_td, double p_cs,
                                                      std::uint64_t seed,
                                                      const SyntheticOptions& options = {});

}  // namespace argnet::data
