#include "argnet/rationale/prompt.hpp"

#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::rationale {

namespace {

const PromptTemplate kEnglishTemplate{
    "veracity",
    "{demos}Q: Given the following message, predict its veracity. If it is more likely to be a real message, "
    "return 1; otherwise, return 0. Please refrain from providing ambiguous assessments such as undetermined: "
    "{news}\nA: {eliciting}",
    "en"};

const PromptTemplate kChineseTemplate{
    "veracity",
    "{demos}Q: 给定以下消息，预测其真实性。如果它更可能是真实消息，返回1；否则，返回0。"
    "请避免给出诸如“无法确定”之类的模糊评估：{news}\nA: {eliciting}",
    "zh"};

const LanguagePack kEnglishPack{
    "en",
    "Let's think step by step.",
    "Let's think from the perspective of {perspective}.",
    "textual description",
    "commonsense",
    "You are a senior editor at a news verification desk, preparing annotated examples for a media literacy "
    "course. Students will compare your assessment with the verified outcome, so give your honest reading of "
    "each message.",
    true};

const LanguagePack kChinesePack{"zh",
                                "让我们一步一步地思考。",
                                "让我们从{perspective}的角度思考。",
                                "文本描述",
                                "常识",
                                "你是新闻核查部门的资深编辑，正在为媒体素养课程准备带注释的示例。请给出你对每条消息的真实判断。",
                                false};

/// Single pass over `body`, so substituted text is never rescanned.
std::string substitute(std::string_view body, const std::vector<std::pair<std::string_view, std::string_view>>& vars) {
    std::string out;
    out.reserve(body.size() + 256);
    std::size_t i = 0;
    while (i < body.size()) {
        bool matched = false;
        if (body[i] == '{') {
            for (const auto& [name, value] : vars) {
                if (body.compare(i + 1, name.size(), name) == 0 && i + 1 + name.size() < body.size() &&
                    body[i + 1 + name.size()] == '}') {
                    out += value;
                    i += name.size() + 2;
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out += body[i++];
    }
    return out;
}

void rstrip(std::string& s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) s.pop_back();
}

std::string demo_answer(const PromptStrategy& s, const Demo& d) {
    if (s.kind == PromptKind::FewShotCot) return *d.rationale;
    return *d.item.label == data::Label::Real ? "1" : "0";
}

void check_demos(const PromptStrategy& s, std::span<const Demo> demos) {
    if (!s.few_shot()) {
        if (!demos.empty()) throw ValidationError(std::string(to_string(s.kind)) + " prompts take no demos");
        return;
    }
    if (static_cast<int>(demos.size()) != *s.shots) {
        throw ValidationError("expected " + std::to_string(*s.shots) + " demos, got " + std::to_string(demos.size()));
    }
    int real = 0, fake = 0;
    for (const auto& d : demos) {
        if (!d.item.label) throw ValidationError("demo " + d.item.id + " has no label");
        (*d.item.label == data::Label::Real ? real : fake)++;
        if (s.kind == PromptKind::FewShotCot && (!d.rationale || d.rationale->empty())) {
            throw ValidationError("few-shot CoT demo " + d.item.id + " has no rationale");
        }
    }
    if (real != fake) {
        throw ValidationError("demos must be balanced, got " + std::to_string(real) + " real and " +
                              std::to_string(fake) + " fake");
    }
}

}  // namespace

std::string_view to_string(PromptKind k) noexcept {
    switch (k) {
        case PromptKind::ZeroShot: return "zero_shot";
        case PromptKind::ZeroShotCot: return "zero_shot_cot";
        case PromptKind::ZeroShotCotPerspective: return "zero_shot_cot_perspective";
        case PromptKind::FewShot: return "few_shot";
        case PromptKind::FewShotCot: return "few_shot_cot";
    }
    return "zero_shot";
}

PromptKind parse_prompt_kind(std::string_view s) {
    for (auto k : {PromptKind::ZeroShot, PromptKind::ZeroShotCot, PromptKind::ZeroShotCotPerspective,
                   PromptKind::FewShot, PromptKind::FewShotCot}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown prompt kind '" + std::string(s) + "'");
}

void PromptStrategy::validate() const {
    if ((kind == PromptKind::ZeroShotCotPerspective) != perspective.has_value()) {
        throw ValidationError("a perspective is required for, and only for, perspective-specific CoT");
    }
    if (few_shot() != shots.has_value()) {
        throw ValidationError("a shot count is required for, and only for, few-shot prompting");
    }
    if (shots && (*shots <= 0 || *shots % 2 != 0)) {
        throw ValidationError("shot count must be positive and even, got " + std::to_string(*shots));
    }
}

nlohmann::json to_json(const PromptStrategy& s) {
    nlohmann::json j{{"kind", to_string(s.kind)}, {"role_play", s.role_play}};
    j["perspective"] = s.perspective ? nlohmann::json(data::to_string(*s.perspective)) : nlohmann::json(nullptr);
    j["shots"] = s.shots ? nlohmann::json(*s.shots) : nlohmann::json(nullptr);
    return j;
}

PromptStrategy prompt_strategy_from_json(const nlohmann::json& j) {
    PromptStrategy s;
    s.kind = parse_prompt_kind(j.at("kind").get<std::string>());
    if (j.contains("perspective") && !j["perspective"].is_null()) {
        s.perspective = data::parse_perspective(j["perspective"].get<std::string>());
    }
    if (j.contains("shots") && !j["shots"].is_null()) s.shots = j["shots"].get<int>();
    s.role_play = j.value("role_play", false);
    s.validate();
    return s;
}

void PromptTemplate::check_placeholders(const PromptStrategy& s) const {
    std::vector<std::string_view> required{"{news}"};
    if (s.chain_of_thought() || s.few_shot()) required.push_back("{eliciting}");
    if (s.few_shot()) required.push_back("{demos}");
    for (auto ph : required) {
        if (body.find(ph) == std::string::npos) {
            throw ValidationError("template " + template_id + "/" + language + " lacks placeholder " +
                                  std::string(ph));
        }
    }
}

const PromptTemplate& builtin_template(std::string_view language) {
    if (language == "en") return kEnglishTemplate;
    if (language == "zh") return kChineseTemplate;
    throw ValidationError("no built-in template for language '" + std::string(language) + "'");
}

const LanguagePack& builtin_language_pack(std::string_view language) {
    if (language == "en") return kEnglishPack;
    if (language == "zh") return kChinesePack;
    throw ValidationError("no built-in language pack for '" + std::string(language) + "'");
}

PromptTemplate load_template(const std::filesystem::path& dir, const std::string& language,
                             const std::string& template_id) {
    const auto path = dir / language / (template_id + ".txt");
    if (!std::filesystem::exists(path)) throw ValidationError("template file not found: " + path.string());
    PromptTemplate t{template_id, util::read_text(path), language};
    rstrip(t.body);
    return t;
}

std::string eliciting_sentence(const PromptStrategy& s, const LanguagePack& pack) {
    switch (s.kind) {
        case PromptKind::ZeroShotCot:
        case PromptKind::FewShotCot: return pack.step_by_step;
        case PromptKind::ZeroShotCotPerspective: {
            const std::string& name = *s.perspective == data::Perspective::TextualDescription
                                          ? pack.textual_description
                                          : pack.commonsense;
            return substitute(pack.perspective_sentence, {{"perspective", name}});
        }
        default: return {};
    }
}

std::string render_prompt(const PromptStrategy& s, const data::NewsItem& item, std::span<const Demo> demos,
                          const PromptTemplate& tmpl, const LanguagePack& pack) {
    s.validate();
    tmpl.check_placeholders(s);
    check_demos(s, demos);
    std::string demo_block;
    for (const auto& d : demos) {
        const std::string answer = demo_answer(s, d);
        std::string q = substitute(tmpl.body, {{"demos", ""}, {"news", d.item.text}, {"eliciting", answer}});
        rstrip(q);
        demo_block += q;
        demo_block += '\n';
    }
    const std::string elicit = eliciting_sentence(s, pack);
    std::string out = substitute(tmpl.body, {{"demos", demo_block}, {"news", item.text}, {"eliciting", elicit}});
    rstrip(out);
    if (s.role_play && !pack.role_play_preamble.empty()) out = pack.role_play_preamble + "\n\n" + out;
    return out;
}

std::string render_prompt(const PromptStrategy& s, const data::NewsItem& item, std::span<const Demo> demos) {
    return render_prompt(s, item, demos, kEnglishTemplate, kEnglishPack);
}

std::string strategy_fingerprint(const PromptStrategy& s, const PromptTemplate& tmpl, const LanguagePack& pack,
                                 std::span<const Demo> demos, std::string_view endpoint_id) {
    nlohmann::json j = to_json(s);
    j["template_id"] = tmpl.template_id;
    j["language"] = tmpl.language;
    j["body"] = util::sha256_hex(tmpl.body);
    j["eliciting"] = eliciting_sentence(s, pack);
    j["preamble"] = s.role_play ? pack.role_play_preamble : "";
    auto demo_list = nlohmann::json::array();
    for (const auto& d : demos) demo_list.push_back({d.item.id, d.rationale.value_or("")});
    j["demos"] = demo_list;
    j["endpoint"] = endpoint_id;
    return util::sha256_hex(j.dump());
}

}  // namespace argnet::rationale
