#include "argnet/nn/tokenizer.hpp"

#include <algorithm>

#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"

namespace argnet::nn {

namespace {

// Decodes one UTF-8 code point starting at s[i]; advances i. Invalid bytes map to U+FFFD.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xe ? 3 : (b0 >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return 0xfffd;
    }
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1f) : len == 3 ? (b0 & 0x0f) : (b0 & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0x3f);
    i += static_cast<std::size_t>(len);
    return cp;
}

bool is_cjk(char32_t c) {
    return (c >= 0x3040 && c <= 0x30ff) || (c >= 0x3400 && c <= 0x4dbf) || (c >= 0x4e00 && c <= 0x9fff) ||
           (c >= 0xac00 && c <= 0xd7af) || (c >= 0xf900 && c <= 0xfaff) || (c >= 0x20000 && c <= 0x2fa1f);
}

bool is_space(char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0xa0 || c == 0x3000;
}

bool is_word_char(char32_t c) {
    if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    // Non-ASCII: punctuation blocks split, other letters join words.
    const bool punct = (c >= 0x2000 && c <= 0x206f) || (c >= 0x3000 && c <= 0x303f) || (c >= 0xff00 && c <= 0xffef);
    return !punct && !is_cjk(c);
}

}  // namespace

int TokenizedText::real_tokens() const noexcept {
    return static_cast<int>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
}

HashTokenizer::HashTokenizer(int vocab_size, int max_tokens, int pad_multiple)
    : vocab_size_(vocab_size), max_tokens_(max_tokens), pad_multiple_(std::max(1, pad_multiple)) {
    if (vocab_size <= kSpecialCount) throw ValidationError("vocab_size too small");
    if (max_tokens < 1) throw ValidationError("max_tokens must be >= 1");
}

std::vector<std::string> HashTokenizer::split(std::string_view text) {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) out.push_back(std::move(word));
        word.clear();
    };
    for (std::size_t i = 0; i < text.size();) {
        const std::size_t start = i;
        const char32_t c = next_code_point(text, i);
        if (is_space(c)) {
            flush();
        } else if (is_word_char(c)) {
            if (c < 0x80) {
                word.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
            } else {
                word.append(text.substr(start, i - start));
            }
        } else {
            flush();
            out.emplace_back(text.substr(start, i - start));
        }
    }
    flush();
    return out;
}

int HashTokenizer::token_id(std::string_view token) const noexcept {
    const auto buckets = static_cast<std::uint64_t>(vocab_size_ - kSpecialCount);
    return kSpecialCount + static_cast<int>(util::fnv1a64(token) % buckets);
}

TokenizedText HashTokenizer::encode(std::string_view text) const {
    TokenizedText out;
    out.ids.push_back(kCls);
    for (const auto& tok : split(text)) {
        if (static_cast<int>(out.ids.size()) >= max_tokens_) break;
        out.ids.push_back(token_id(tok));
    }
    const int real = static_cast<int>(out.ids.size());
    int padded = ((real + pad_multiple_ - 1) / pad_multiple_) * pad_multiple_;
    padded = std::min(padded, max_tokens_);
    out.mask.assign(static_cast<std::size_t>(padded), 0);
    std::fill(out.mask.begin(), out.mask.begin() + real, 1);
    out.ids.resize(static_cast<std::size_t>(padded), kPad);
    return out;
}

std::string HashTokenizer::identifier() const {
    return "hashed-word-v1:vocab=" + std::to_string(vocab_size_) + ":max_tokens=" + std::to_string(max_tokens_);
}

}  // namespace argnet::nn
