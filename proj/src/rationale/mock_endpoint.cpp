#include "argnet/rationale/mock_endpoint.hpp"

#include <fmt/format.h>

#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"

namespace argnet::rationale {

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit(std::uint64_t& state) { return static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53; }

enum class Style { Plain, StepByStep, Td, Cs };

Style style_of(const std::string& prompt) {
    // Only the final answer slot matters; demos may carry their own CoT text.
    const auto a = prompt.rfind("A:");
    const std::string tail = a == std::string::npos ? std::string() : prompt.substr(a);
    if (tail.find("textual description") != std::string::npos || tail.find("文本描述") != std::string::npos) {
        return Style::Td;
    }
    if (tail.find("commonsense") != std::string::npos || tail.find("常识") != std::string::npos) return Style::Cs;
    if (tail.find("step by step") != std::string::npos || tail.find("一步一步") != std::string::npos) {
        return Style::StepByStep;
    }
    return Style::Plain;
}

}  // namespace

MockConfig mock_config_from_json(const nlohmann::json& j) {
    MockConfig c;
    c.accuracy_td = j.value("accuracy_td", c.accuracy_td);
    c.accuracy_cs = j.value("accuracy_cs", c.accuracy_cs);
    c.accuracy_general = j.value("accuracy_general", c.accuracy_general);
    c.refusal_rate = j.value("refusal_rate", c.refusal_rate);
    c.fake_cue = j.value("fake_cue", c.fake_cue);
    c.rationale_words = j.value("rationale_words", c.rationale_words);
    c.seed = j.value("seed", c.seed);
    return c;
}

nlohmann::json to_json(const MockConfig& c) {
    return {{"accuracy_td", c.accuracy_td},         {"accuracy_cs", c.accuracy_cs},
            {"accuracy_general", c.accuracy_general}, {"refusal_rate", c.refusal_rate},
            {"fake_cue", c.fake_cue},               {"rationale_words", c.rationale_words},
            {"seed", c.seed}};
}

MockEndpoint::MockEndpoint(MockConfig cfg, std::unordered_map<std::string, data::Label> answer_key)
    : cfg_(std::move(cfg)), key_(std::move(answer_key)) {}

std::unique_ptr<MockEndpoint> MockEndpoint::echo(std::string reply) {
    auto m = std::make_unique<MockEndpoint>();
    m->echo_ = std::move(reply);
    return m;
}

std::string MockEndpoint::identifier() const {
    if (echo_) return "mock:echo:" + util::sha256_hex(*echo_).substr(0, 16);
    return "mock:" + util::sha256_hex(to_json(cfg_).dump()).substr(0, 16);
}

void MockEndpoint::fail_next(int n, int status) {
    std::lock_guard lock(mu_);
    failures_left_ = n;
    failure_status_ = status;
}

std::size_t MockEndpoint::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

std::optional<data::Label> MockEndpoint::lookup(const std::string& prompt) const {
    const auto q = prompt.rfind("Q:");
    const std::string_view target = q == std::string::npos ? std::string_view(prompt)
                                                           : std::string_view(prompt).substr(q);
    std::optional<data::Label> best;
    std::size_t best_len = 0;
    for (const auto& [text, label] : key_) {
        if (text.size() > best_len && target.find(text) != std::string_view::npos) {
            best = label;
            best_len = text.size();
        }
    }
    return best;
}

std::string MockEndpoint::complete(const std::string& prompt) {
    {
        std::lock_guard lock(mu_);
        ++calls_;
        if (failures_left_ > 0) {
            --failures_left_;
            const int s = failure_status_;
            if (s == 401 || s == 403) throw AuthError(fmt::format("mock endpoint status {}", s), s);
            throw TransportError(fmt::format("mock endpoint status {}", s), s, s == 429 || s >= 500 || s == 0);
        }
    }
    if (echo_) return *echo_;

    std::uint64_t state = util::fnv1a64(prompt) ^ cfg_.seed;
    if (unit(state) < cfg_.refusal_rate) return "I cannot assess this content.";

    const Style style = style_of(prompt);
    const double accuracy = style == Style::Td   ? cfg_.accuracy_td
                            : style == Style::Cs ? cfg_.accuracy_cs
                                                 : cfg_.accuracy_general;
    const bool correct = unit(state) < accuracy;
    data::Label verdict;
    if (auto gold = lookup(prompt)) {
        verdict = correct ? *gold : (*gold == data::Label::Real ? data::Label::Fake : data::Label::Real);
    } else {
        verdict = (splitmix(state) & 1) ? data::Label::Fake : data::Label::Real;
    }
    const char digit = verdict == data::Label::Real ? '1' : '0';
    if (style == Style::Plain) return std::string(1, digit);

    std::string text;
    switch (style) {
        case Style::Td: text = "Looking at the wording of this message,"; break;
        case Style::Cs: text = "Judging by everyday experience,"; break;
        default: text = "Firstly, consider the claims one by one;"; break;
    }
    for (int i = 0; i < cfg_.rationale_words; ++i) text += fmt::format(" rw{}", splitmix(state) % 200);
    if (verdict == data::Label::Fake) text += " " + cfg_.fake_cue;
    text += ".";
    if (style == Style::StepByStep) return text + fmt::format(" Therefore, the answer (arabic numerals) is {}", digit);
    return text + fmt::format(" Return {}.", digit);
}

}  // namespace argnet::rationale
