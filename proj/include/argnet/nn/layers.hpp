#pragma once

#include <string>
#include <vector>

#include "argnet/nn/graph.hpp"

namespace argnet::nn {

/// Glorot-uniform matrix.
Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

/// Sequence of token rows plus its padding mask.
struct SeqVar {
    Var values;
    Mask mask;
};

/// softmax((q Wq)(k Wk)^T / sqrt(d)) (v Wv) with masked keys excluded and
/// padded query rows zeroed. d is the projection width.
SeqVar cross_attention(Graph& g, const SeqVar& q, const SeqVar& k, const SeqVar& v, Var w_q, Var w_k, Var w_v);

/// Softmax of x * score over unmasked rows, then the weighted sum of rows (1 x d).
Var attentive_pool(Graph& g, const SeqVar& x, Var score);

/// y = x W + b, row vectors.
class Linear {
public:
    Linear(ParameterSet& params, const std::string& prefix, int in, int out, Rng& rng, bool bias = true);
    Var forward(Graph& g, Var x) const;
    int in_features() const noexcept { return in_; }
    int out_features() const noexcept { return out_; }

private:
    const Parameter* weight_;
    const Parameter* bias_ = nullptr;
    int in_, out_;
};

/// Hidden layers with GELU and dropout, linear output layer (no activation).
class Mlp {
public:
    Mlp(ParameterSet& params, const std::string& prefix, int in, const std::vector<int>& hidden, int out,
        double dropout, Rng& rng);
    Var forward(Graph& g, Var x, Mode mode) const;

private:
    std::vector<Linear> layers_;
    double dropout_;
};

class LayerNorm {
public:
    LayerNorm(ParameterSet& params, const std::string& prefix, int dim);
    Var forward(Graph& g, Var x) const;

private:
    const Parameter* gamma_;
    const Parameter* beta_;
};

/// Single-head cross-attention with unbiased d x d projections:
/// softmax((Q Wq)(K Wk)^T / sqrt(d)) (V Wv). Output rows follow Q's mask.
class CrossAttention {
public:
    CrossAttention(ParameterSet& params, const std::string& prefix, int dim, Rng& rng);
    SeqVar forward(Graph& g, const SeqVar& q, const SeqVar& k, const SeqVar& v) const;

    const Parameter& w_q() const noexcept { return *wq_; }
    const Parameter& w_k() const noexcept { return *wk_; }
    const Parameter& w_v() const noexcept { return *wv_; }

private:
    const Parameter* wq_;
    const Parameter* wk_;
    const Parameter* wv_;
    int dim_;
};

/// Standard multi-head self-attention with output projection.
class MultiHeadSelfAttention {
public:
    MultiHeadSelfAttention(ParameterSet& params, const std::string& prefix, int dim, int heads, Rng& rng);
    Var forward(Graph& g, Var x, const Mask& mask, Mode mode, double dropout) const;

private:
    Linear q_, k_, v_, o_;
    int dim_, heads_;
};

/// Pre-norm transformer block: x + MHA(LN(x)), then h + FFN(LN(h)).
class TransformerBlock {
public:
    TransformerBlock(ParameterSet& params, const std::string& prefix, int dim, int heads, int ffn_dim,
                     double dropout, Rng& rng);
    SeqVar forward(Graph& g, const SeqVar& x, Mode mode) const;

private:
    LayerNorm ln1_, ln2_;
    MultiHeadSelfAttention attn_;
    Linear ff1_, ff2_;
    double dropout_;
};

/// Learned scoring vector; softmax over unmasked rows; weighted sum of rows.
class AttentivePool {
public:
    AttentivePool(ParameterSet& params, const std::string& prefix, int dim, Rng& rng);
    Var forward(Graph& g, const SeqVar& x) const;
    const Parameter& scorer() const noexcept { return *score_; }

private:
    const Parameter* score_;
};

}  // namespace argnet::nn
