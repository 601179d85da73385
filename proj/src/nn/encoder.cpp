#include "argnet/nn/encoder.hpp"

#include <numeric>

#include "argnet/nn/ops.hpp"

namespace argnet::nn {

TextEncoder::TextEncoder(ParameterSet& params, const std::string& prefix, const EncoderConfig& cfg, Rng& rng)
    : prefix_(prefix),
      cfg_(cfg),
      tokenizer_(cfg.vocab_size, cfg.max_tokens, cfg.pad_multiple),
      token_emb_(&params.add(prefix + ".token_emb", normal_init(cfg.vocab_size, cfg.dim, 0.5, rng))),
      pos_emb_(&params.add(prefix + ".pos_emb", normal_init(cfg.max_tokens, cfg.dim, 0.1, rng))),
      emb_ln_(params, prefix + ".emb_ln", cfg.dim),
      final_ln_(params, prefix + ".final_ln", cfg.dim) {
    blocks_.reserve(static_cast<std::size_t>(cfg.layers));
    for (int l = 0; l < cfg.layers; ++l) {
        blocks_.emplace_back(params, prefix + ".block" + std::to_string(l), cfg.dim, cfg.heads, cfg.ffn_dim,
                             cfg.dropout, rng);
    }
}

SeqVar TextEncoder::forward(Graph& g, const TokenizedText& tokens, Mode mode) const {
    std::vector<int> positions(tokens.ids.size());
    std::iota(positions.begin(), positions.end(), 0);
    Var x = ops::add(ops::gather_rows(g.param(*token_emb_), tokens.ids), ops::gather_rows(g.param(*pos_emb_), positions));
    x = emb_ln_.forward(g, x);
    if (mode.training()) x = ops::dropout(x, cfg_.dropout, *mode.rng);
    SeqVar h{x, tokens.mask};
    for (const auto& block : blocks_) h = block.forward(g, h, mode);
    return {ops::mask_rows(final_ln_.forward(g, h.values), h.mask), h.mask};
}

std::string TextEncoder::identifier() const {
    return "transformer-v1:d=" + std::to_string(cfg_.dim) + ":layers=" + std::to_string(cfg_.layers) +
           ":heads=" + std::to_string(cfg_.heads) + ":" + tokenizer_.identifier();
}

}  // namespace argnet::nn
