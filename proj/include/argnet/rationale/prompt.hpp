#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "argnet/data/types.hpp"
#include "json.hpp"

namespace argnet::rationale {

enum class PromptKind { ZeroShot, ZeroShotCot, ZeroShotCotPerspective, FewShot, FewShotCot };

std::string_view to_string(PromptKind k) noexcept;
PromptKind parse_prompt_kind(std::string_view s);

struct PromptStrategy {
    PromptKind kind = PromptKind::ZeroShot;
    std::optional<data::Perspective> perspective;  // only for ZeroShotCotPerspective
    std::optional<int> shots;                      // only for the few-shot kinds; even
    bool role_play = false;

    void validate() const;
    bool few_shot() const noexcept { return kind == PromptKind::FewShot || kind == PromptKind::FewShotCot; }
    bool chain_of_thought() const noexcept {
        return kind == PromptKind::ZeroShotCot || kind == PromptKind::ZeroShotCotPerspective ||
               kind == PromptKind::FewShotCot;
    }

    static PromptStrategy zero_shot(bool role_play = false) { return {PromptKind::ZeroShot, {}, {}, role_play}; }
    static PromptStrategy zero_shot_cot(bool role_play = false) { return {PromptKind::ZeroShotCot, {}, {}, role_play}; }
    static PromptStrategy perspective_cot(data::Perspective p, bool role_play = false) {
        return {PromptKind::ZeroShotCotPerspective, p, {}, role_play};
    }
    static PromptStrategy few_shot(int shots, bool role_play = false) {
        return {PromptKind::FewShot, {}, shots, role_play};
    }
    static PromptStrategy few_shot_cot(int shots, bool role_play = false) {
        return {PromptKind::FewShotCot, {}, shots, role_play};
    }
};

nlohmann::json to_json(const PromptStrategy& s);
PromptStrategy prompt_strategy_from_json(const nlohmann::json& j);

/// Question/answer body with {news}, {demos} and {eliciting} placeholders.
/// Demos are rendered with the same body: {news} = demo text, {eliciting} = answer.
struct PromptTemplate {
    std::string template_id;
    std::string body;
    std::string language;

    /// Throws ValidationError naming the missing placeholder.
    void check_placeholders(const PromptStrategy& s) const;
};

/// Language-specific strings around the template.
struct LanguagePack {
    std::string language;
    std::string step_by_step;
    /// Contains {perspective}.
    std::string perspective_sentence;
    std::string textual_description;
    std::string commonsense;
    std::string role_play_preamble;
    bool role_play_default = false;
};

const PromptTemplate& builtin_template(std::string_view language);
const LanguagePack& builtin_language_pack(std::string_view language);

/// Reads `<dir>/<language>/<template_id>.txt`.
PromptTemplate load_template(const std::filesystem::path& dir, const std::string& language,
                             const std::string& template_id);

struct Demo {
    data::NewsItem item;
    std::optional<std::string> rationale;  // required for few-shot CoT
};

/// The eliciting sentence a strategy appends after "A:", or empty.
std::string eliciting_sentence(const PromptStrategy& s, const LanguagePack& pack);

/// Throws ValidationError when demos do not fit the strategy.
std::string render_prompt(const PromptStrategy& s, const data::NewsItem& item, std::span<const Demo> demos,
                          const PromptTemplate& tmpl, const LanguagePack& pack);
/// English built-in template and language pack.
std::string render_prompt(const PromptStrategy& s, const data::NewsItem& item, std::span<const Demo> demos = {});

/// Stable digest of everything that shapes a prompt except the target news.
std::string strategy_fingerprint(const PromptStrategy& s, const PromptTemplate& tmpl, const LanguagePack& pack,
                                 std::span<const Demo> demos, std::string_view endpoint_id);

}  // namespace argnet::rationale
