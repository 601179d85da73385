#pragma once

#include <memory>
#include <string>
#include <vector>

#include "argnet/nn/layers.hpp"
#include "argnet/nn/tokenizer.hpp"

namespace argnet::nn {

struct EncoderConfig {
    int vocab_size = 8192;
    int dim = 64;
    int heads = 4;
    int layers = 1;
    int ffn_dim = 256;
    int max_tokens = 170;
    int pad_multiple = 8;
    double dropout = 0.2;
};

/// Small transformer text encoder: token + position embeddings, layer norm,
/// pre-norm blocks, final layer norm. Padding rows are zero in the output.
class TextEncoder {
public:
    TextEncoder(ParameterSet& params, const std::string& prefix, const EncoderConfig& cfg, Rng& rng);

    SeqVar forward(Graph& g, const TokenizedText& tokens, Mode mode) const;
    SeqVar forward(Graph& g, std::string_view text, Mode mode) const { return forward(g, tokenizer_.encode(text), mode); }

    const HashTokenizer& tokenizer() const noexcept { return tokenizer_; }
    const std::string& prefix() const noexcept { return prefix_; }
    std::string identifier() const;

private:
    std::string prefix_;
    EncoderConfig cfg_;
    HashTokenizer tokenizer_;
    const Parameter* token_emb_;
    const Parameter* pos_emb_;
    LayerNorm emb_ln_;
    std::vector<TransformerBlock> blocks_;
    LayerNorm final_ln_;
};

}  // namespace argnet::nn
