#include "argnet/nn/layers.hpp"

#include <cmath>

#include "argnet/nn/ops.hpp"
#include "argnet/util/error.hpp"

namespace argnet::nn {

Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> u(-limit, limit);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
    std::normal_distribution<double> n(0.0, stddev);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

SeqVar cross_attention(Graph&, const SeqVar& q, const SeqVar& k, const SeqVar& v, Var w_q, Var w_k, Var w_v) {
    const auto d = w_q.cols();
    if (q.values.cols() != w_q.rows() || k.values.cols() != w_k.rows() || v.values.cols() != w_v.rows() ||
        w_k.cols() != d) {
        throw ValidationError("cross_attention: dimension mismatch");
    }
    if (k.values.rows() != v.values.rows() || k.mask != v.mask) {
        throw ValidationError("cross_attention: K and V must share length and mask");
    }
    if (static_cast<Eigen::Index>(q.mask.size()) != q.values.rows() ||
        static_cast<Eigen::Index>(k.mask.size()) != k.values.rows()) {
        throw ValidationError("cross_attention: mask length mismatch");
    }
    Var qp = ops::matmul(q.values, w_q);
    Var kp = ops::matmul(k.values, w_k);
    Var vp = ops::matmul(v.values, w_v);
    Var logits = ops::scale(ops::matmul_nt(qp, kp), 1.0 / std::sqrt(static_cast<double>(d)));
    Var attn = ops::masked_softmax_rows(logits, k.mask);
    return {ops::mask_rows(ops::matmul(attn, vp), q.mask), q.mask};
}

Var attentive_pool(Graph&, const SeqVar& x, Var score) {
    Var scores = ops::transpose(ops::matmul(x.values, score));  // 1 x L
    return ops::matmul(ops::masked_softmax_rows(scores, x.mask), x.values);
}

Linear::Linear(ParameterSet& params, const std::string& prefix, int in, int out, Rng& rng, bool bias)
    : weight_(&params.add(prefix + ".weight", xavier_uniform(in, out, rng))), in_(in), out_(out) {
    if (bias) bias_ = &params.add(prefix + ".bias", Matrix::Zero(1, out));
}

Var Linear::forward(Graph& g, Var x) const {
    Var y = ops::matmul(x, g.param(*weight_));
    return bias_ ? ops::add_row(y, g.param(*bias_)) : y;
}

Mlp::Mlp(ParameterSet& params, const std::string& prefix, int in, const std::vector<int>& hidden, int out,
         double dropout, Rng& rng)
    : dropout_(dropout) {
    int prev = in;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        layers_.emplace_back(params, prefix + ".fc" + std::to_string(i), prev, hidden[i], rng);
        prev = hidden[i];
    }
    layers_.emplace_back(params, prefix + ".out", prev, out, rng);
}

Var Mlp::forward(Graph& g, Var x, Mode mode) const {
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        x = ops::gelu(layers_[i].forward(g, x));
        if (mode.training()) x = ops::dropout(x, dropout_, *mode.rng);
    }
    return layers_.back().forward(g, x);
}

LayerNorm::LayerNorm(ParameterSet& params, const std::string& prefix, int dim)
    : gamma_(&params.add(prefix + ".gamma", Matrix::Ones(1, dim))),
      beta_(&params.add(prefix + ".beta", Matrix::Zero(1, dim))) {}

Var LayerNorm::forward(Graph& g, Var x) const {
    return ops::layer_norm_rows(x, g.param(*gamma_), g.param(*beta_));
}

CrossAttention::CrossAttention(ParameterSet& params, const std::string& prefix, int dim, Rng& rng)
    : wq_(&params.add(prefix + ".w_q", xavier_uniform(dim, dim, rng))),
      wk_(&params.add(prefix + ".w_k", xavier_uniform(dim, dim, rng))),
      wv_(&params.add(prefix + ".w_v", xavier_uniform(dim, dim, rng))),
      dim_(dim) {}

SeqVar CrossAttention::forward(Graph& g, const SeqVar& q, const SeqVar& k, const SeqVar& v) const {
    if (q.values.cols() != dim_) {
        throw ValidationError("cross_attention: inputs must have d = " + std::to_string(dim_) + " columns");
    }
    return cross_attention(g, q, k, v, g.param(*wq_), g.param(*wk_), g.param(*wv_));
}

MultiHeadSelfAttention::MultiHeadSelfAttention(ParameterSet& params, const std::string& prefix, int dim, int heads,
                                               Rng& rng)
    : q_(params, prefix + ".q", dim, dim, rng),
      k_(params, prefix + ".k", dim, dim, rng),
      v_(params, prefix + ".v", dim, dim, rng),
      o_(params, prefix + ".o", dim, dim, rng),
      dim_(dim),
      heads_(heads) {
    if (heads <= 0 || dim % heads != 0) throw ValidationError("attention: d must be divisible by heads");
}

Var MultiHeadSelfAttention::forward(Graph& g, Var x, const Mask& mask, Mode mode, double dropout) const {
    const int hd = dim_ / heads_;
    Var q = q_.forward(g, x), k = k_.forward(g, x), v = v_.forward(g, x);
    std::vector<Var> heads;
    heads.reserve(static_cast<std::size_t>(heads_));
    const double inv = 1.0 / std::sqrt(static_cast<double>(hd));
    for (int h = 0; h < heads_; ++h) {
        Var qh = ops::slice_cols(q, h * hd, hd);
        Var kh = ops::slice_cols(k, h * hd, hd);
        Var vh = ops::slice_cols(v, h * hd, hd);
        Var a = ops::masked_softmax_rows(ops::scale(ops::matmul_nt(qh, kh), inv), mask);
        if (mode.training()) a = ops::dropout(a, dropout, *mode.rng);
        heads.push_back(ops::matmul(a, vh));
    }
    return o_.forward(g, heads_ == 1 ? heads.front() : ops::concat_cols(heads));
}

TransformerBlock::TransformerBlock(ParameterSet& params, const std::string& prefix, int dim, int heads, int ffn_dim,
                                   double dropout, Rng& rng)
    : ln1_(params, prefix + ".ln1", dim),
      ln2_(params, prefix + ".ln2", dim),
      attn_(params, prefix + ".attn", dim, heads, rng),
      ff1_(params, prefix + ".ff1", dim, ffn_dim, rng),
      ff2_(params, prefix + ".ff2", ffn_dim, dim, rng),
      dropout_(dropout) {}

SeqVar TransformerBlock::forward(Graph& g, const SeqVar& x, Mode mode) const {
    Var a = attn_.forward(g, ln1_.forward(g, x.values), x.mask, mode, dropout_);
    if (mode.training()) a = ops::dropout(a, dropout_, *mode.rng);
    Var h = ops::add(x.values, a);
    Var f = ff2_.forward(g, ops::gelu(ff1_.forward(g, ln2_.forward(g, h))));
    if (mode.training()) f = ops::dropout(f, dropout_, *mode.rng);
    return {ops::mask_rows(ops::add(h, f), x.mask), x.mask};
}

AttentivePool::AttentivePool(ParameterSet& params, const std::string& prefix, int dim, Rng& rng)
    : score_(&params.add(prefix + ".score", xavier_uniform(dim, 1, rng))) {}

Var AttentivePool::forward(Graph& g, const SeqVar& x) const { return attentive_pool(g, x, g.param(*score_)); }

}  // namespace argnet::nn
