#include "argnet/rationale/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace argnet::rationale {

namespace {

bool ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool ascii_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool standalone_at(std::string_view t, std::size_t i) {
    if (i > 0) {
        char p = t[i - 1];
        if (ascii_alnum(p) || p == '_') return false;
        // decimal like 4.0 or 1,0
        if ((p == '.' || p == ',') && i > 1 && ascii_digit(t[i - 2])) return false;
    }
    if (i + 1 < t.size()) {
        char n = t[i + 1];
        if (ascii_alnum(n) || n == '_') return false;
        if ((n == '.' || n == ',') && i + 2 < t.size() && ascii_digit(t[i + 2])) return false;
    }
    return true;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

constexpr std::array<std::string_view, 14> kRefusalMarkers{
    "i cannot",  "i can't",       "i can not", "i am unable", "i'm unable",       "unable to",
    "i'm sorry", "i am sorry",    "as an ai",  "i won't",     "cannot determine", "无法",
    "不能",      "抱歉"};

}  // namespace

std::size_t last_verdict_position(std::string_view text) noexcept {
    for (std::size_t i = text.size(); i-- > 0;) {
        if ((text[i] == '0' || text[i] == '1') && standalone_at(text, i)) return i;
    }
    return std::string_view::npos;
}

ParsedResponse parse_judgment(std::string_view response) {
    ParsedResponse out;
    out.rationale_text = std::string(trim(response));
    const std::size_t pos = last_verdict_position(response);
    if (pos != std::string_view::npos) {
        // Prompt convention: 1 = real, 0 = fake.
        out.judgment = response[pos] == '1' ? data::Label::Real : data::Label::Fake;
        out.status = data::ParseStatus::Ok;
        return out;
    }
    const std::string low = lower(response);
    const bool refusal = low.empty() || std::any_of(kRefusalMarkers.begin(), kRefusalMarkers.end(),
                                                    [&](std::string_view m) { return low.find(m) != std::string::npos; });
    out.status = refusal ? data::ParseStatus::Refusal : data::ParseStatus::Ambiguous;
    return out;
}

}  // namespace argnet::rationale
