#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "argnet/nn/graph.hpp"

namespace argnet::nn {

/// Token ids of one text, already padded. mask[i] marks real tokens.
struct TokenizedText {
    std::vector<int> ids;
    Mask mask;
    int real_tokens() const noexcept;
};

/// Feature-hashing tokenizer. ASCII words and non-CJK letters form words
/// (lowercased); CJK characters and punctuation are single tokens. Each
/// sequence starts with [CLS] and is truncated to `max_tokens` in total,
/// then padded to a multiple of `pad_multiple` (capped at `max_tokens`).
class HashTokenizer {
public:
    static constexpr int kPad = 0;
    static constexpr int kCls = 1;
    static constexpr int kSpecialCount = 4;

    HashTokenizer(int vocab_size, int max_tokens, int pad_multiple = 8);

    /// Surface tokens of `text` before hashing, without [CLS] or truncation.
    static std::vector<std::string> split(std::string_view text);
    int token_id(std::string_view token) const noexcept;
    TokenizedText encode(std::string_view text) const;

    int vocab_size() const noexcept { return vocab_size_; }
    int max_tokens() const noexcept { return max_tokens_; }
    /// Identifier stored in checkpoints.
    std::string identifier() const;

private:
    int vocab_size_;
    int max_tokens_;
    int pad_multiple_;
};

}  // namespace argnet::nn
