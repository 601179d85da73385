#include "argnet/data/types.hpp"

#include "argnet/util/error.hpp"

namespace argnet::data {

using nlohmann::json;

std::string_view to_string(Label l) noexcept { return l == Label::Real ? "real" : "fake"; }

std::string_view to_string(Language l) noexcept {
    switch (l) {
        case Language::Zh: return "zh";
        case Language::En: return "en";
        case Language::Other: break;
    }
    return "other";
}

std::string_view to_string(Perspective p) noexcept {
    return p == Perspective::TextualDescription ? "td" : "cs";
}

std::string_view to_string(ParseStatus s) noexcept {
    switch (s) {
        case ParseStatus::Ok: return "ok";
        case ParseStatus::Refusal: return "refusal";
        case ParseStatus::Ambiguous: break;
    }
    return "ambiguous";
}

std::string_view to_string(SplitPart p) noexcept {
    switch (p) {
        case SplitPart::Train: return "train";
        case SplitPart::Val: return "val";
        case SplitPart::Test: break;
    }
    return "test";
}

Label parse_label(std::string_view s) {
    if (s == "real") return Label::Real;
    if (s == "fake") return Label::Fake;
    throw ValidationError("unknown label '" + std::string(s) + "' (expected real|fake)");
}

Language parse_language(std::string_view s) {
    if (s == "zh") return Language::Zh;
    if (s == "en") return Language::En;
    return Language::Other;
}

Perspective parse_perspective(std::string_view s) {
    if (s == "td" || s == "textual_description") return Perspective::TextualDescription;
    if (s == "cs" || s == "commonsense") return Perspective::Commonsense;
    throw ValidationError("unknown perspective '" + std::string(s) + "'");
}

ParseStatus parse_status(std::string_view s) {
    if (s == "ok") return ParseStatus::Ok;
    if (s == "refusal") return ParseStatus::Refusal;
    if (s == "ambiguous") return ParseStatus::Ambiguous;
    throw ValidationError("unknown parse_status '" + std::string(s) + "'");
}

SplitPart parse_split_part(std::string_view s) {
    if (s == "train") return SplitPart::Train;
    if (s == "val") return SplitPart::Val;
    if (s == "test") return SplitPart::Test;
    throw ValidationError("unknown split part '" + std::string(s) + "'");
}

std::optional<std::uint8_t> usefulness_for(const std::optional<Label>& judgment,
                                           const std::optional<Label>& gold) noexcept {
    if (!gold) return std::nullopt;
    if (!judgment) return std::uint8_t{0};
    return static_cast<std::uint8_t>(*judgment == *gold ? 1 : 0);
}

json to_json(const NewsItem& item) {
    json j;
    j["id"] = item.id;
    j["text"] = item.text;
    j["label"] = item.label ? json(to_string(*item.label)) : json(nullptr);
    j["timestamp"] = item.timestamp ? json(*item.timestamp) : json(nullptr);
    j["language"] = to_string(item.language);
    return j;
}

json to_json(const RationaleRecord& rec) {
    json j;
    j["news_id"] = rec.news_id;
    j["perspective"] = to_string(rec.perspective);
    j["rationale_text"] = rec.rationale_text;
    j["llm_judgment"] = rec.llm_judgment ? json(to_string(*rec.llm_judgment)) : json(nullptr);
    j["parse_status"] = to_string(rec.parse_status);
    j["usefulness"] = rec.usefulness ? json(int(*rec.usefulness)) : json(nullptr);
    j["raw_response"] = rec.raw_response;
    return j;
}

json to_json(const EnrichedSample& sample) {
    json j = to_json(sample.item);
    json r = json::object();
    if (sample.rationale_td) r["td"] = to_json(*sample.rationale_td);
    if (sample.rationale_cs) r["cs"] = to_json(*sample.rationale_cs);
    j["rationales"] = std::move(r);
    return j;
}

namespace {

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

NewsItem news_item_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("record is not an object");
    NewsItem item;
    item.id = require_string(j, "id");
    if (item.id.empty()) throw ValidationError("empty id");
    item.text = require_string(j, "text");
    if (item.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos) {
        throw ValidationError("text is empty after trimming");
    }
    const auto& label = require(j, "label");
    if (label.is_string()) {
        item.label = parse_label(label.get<std::string>());
    } else if (!label.is_null()) {
        throw ValidationError("field 'label' must be \"real\", \"fake\" or null");
    }
    if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw ValidationError("field 'timestamp' must be an integer or null");
        item.timestamp = it->get<std::int64_t>();
    }
    if (auto it = j.find("language"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("field 'language' must be a string");
        item.language = parse_language(it->get<std::string>());
    }
    return item;
}

RationaleRecord rationale_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("rationale record is not an object");
    RationaleRecord rec;
    rec.news_id = require_string(j, "news_id");
    rec.perspective = parse_perspective(require_string(j, "perspective"));
    rec.rationale_text = require_string(j, "rationale_text");
    if (auto it = j.find("llm_judgment"); it != j.end() && !it->is_null()) {
        rec.llm_judgment = parse_label(it->get<std::string>());
    }
    rec.parse_status = parse_status(require_string(j, "parse_status"));
    if (auto it = j.find("usefulness"); it != j.end() && !it->is_null()) {
        const int u = it->get<int>();
        if (u != 0 && u != 1) throw ValidationError("usefulness must be 0, 1 or null");
        rec.usefulness = static_cast<std::uint8_t>(u);
    }
    if (auto it = j.find("raw_response"); it != j.end() && it->is_string()) {
        rec.raw_response = it->get<std::string>();
    }
    return rec;
}

EnrichedSample enriched_from_json(const json& j) {
    EnrichedSample s;
    s.item = news_item_from_json(j);
    if (auto it = j.find("rationales"); it != j.end() && it->is_object()) {
        for (const auto& [key, value] : it->items()) {
            auto rec = rationale_from_json(value);
            if (rec.news_id != s.item.id) {
                throw ValidationError("rationale references '" + rec.news_id + "', expected '" + s.item.id + "'");
            }
            if (parse_perspective(key) != rec.perspective) {
                throw ValidationError("rationale under key '" + key + "' has perspective " +
                                      std::string(to_string(rec.perspective)));
            }
            s.rationale(rec.perspective) = std::move(rec);
        }
    }
    return s;
}

}  // namespace argnet::data

#include "argnet/data/sample_view.hpp"

namespace argnet::data {

const RationaleRecord& SampleView::rationale(Perspective p) const {
    if (audit_) audit_->rationale_reads.fetch_add(1, std::memory_order_relaxed);
    const auto& rec = sample_->rationale(p);
    if (!rec) {
        throw MissingFieldError(std::string("missing ") + std::string(to_string(p)) + " rationale",
                                {sample_->item.id});
    }
    return *rec;
}

}  // namespace argnet::data
