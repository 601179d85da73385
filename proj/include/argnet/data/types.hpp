#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace argnet::data {

/// Internal veracity encoding. Prompt-side conventions (where "1" means
/// real) are converted at the parse boundary, never past it.
enum class Label : std::uint8_t { Real = 0, Fake = 1 };

enum class Language : std::uint8_t { Zh, En, Other };

enum class Perspective : std::uint8_t { TextualDescription, Commonsense };

enum class ParseStatus : std::uint8_t { Ok, Refusal, Ambiguous };

inline constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }
inline constexpr Label label_from_int(int v) noexcept { return v ? Label::Fake : Label::Real; }

std::string_view to_string(Label l) noexcept;
std::string_view to_string(Language l) noexcept;
/// Short tag used in files and keys: "td" / "cs".
std::string_view to_string(Perspective p) noexcept;
std::string_view to_string(ParseStatus s) noexcept;

Label parse_label(std::string_view s);
Language parse_language(std::string_view s);
Perspective parse_perspective(std::string_view s);
ParseStatus parse_status(std::string_view s);

struct NewsItem {
    std::string id;
    std::string text;
    std::optional<Label> label;
    std::optional<std::int64_t> timestamp;
    Language language = Language::En;
};

struct RationaleRecord {
    std::string news_id;
    Perspective perspective = Perspective::TextualDescription;
    std::string rationale_text;
    std::optional<Label> llm_judgment;
    ParseStatus parse_status = ParseStatus::Ok;
    std::optional<std::uint8_t> usefulness;
    std::string raw_response;
};

/// Usefulness label for a rationale given its judgment and the gold label.
/// A missing judgment (refusal / no verdict) counts as incorrect.
std::optional<std::uint8_t> usefulness_for(const std::optional<Label>& judgment,
                                           const std::optional<Label>& gold) noexcept;

struct EnrichedSample {
    NewsItem item;
    std::optional<RationaleRecord> rationale_td;
    std::optional<RationaleRecord> rationale_cs;

    const std::optional<RationaleRecord>& rationale(Perspective p) const noexcept {
        return p == Perspective::TextualDescription ? rationale_td : rationale_cs;
    }
    std::optional<RationaleRecord>& rationale(Perspective p) noexcept {
        return p == Perspective::TextualDescription ? rationale_td : rationale_cs;
    }
    bool has_both_rationales() const noexcept { return rationale_td && rationale_cs; }
};

template <class T>
struct BasicSplit {
    std::vector<T> train;
    std::vector<T> val;
    std::vector<T> test;
};

using DatasetSplit = BasicSplit<EnrichedSample>;

enum class SplitPart : std::uint8_t { Train, Val, Test };
std::string_view to_string(SplitPart p) noexcept;
SplitPart parse_split_part(std::string_view s);

template <class T>
const std::vector<T>& part_of(const BasicSplit<T>& s, SplitPart p) noexcept {
    switch (p) {
        case SplitPart::Train: return s.train;
        case SplitPart::Val: return s.val;
        case SplitPart::Test: break;
    }
    return s.test;
}

// JSON mapping for the corpus / enriched JSONL schemas.
nlohmann::json to_json(const NewsItem& item);
nlohmann::json to_json(const RationaleRecord& rec);
nlohmann::json to_json(const EnrichedSample& sample);
NewsItem news_item_from_json(const nlohmann::json& j);
RationaleRecord rationale_from_json(const nlohmann::json& j);
EnrichedSample enriched_from_json(const nlohmann::json& j);

}  // namespace argnet::data
