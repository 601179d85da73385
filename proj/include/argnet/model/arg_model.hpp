#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "argnet/data/types.hpp"
#include "argnet/model/detector.hpp"
#include "argnet/model/hyperparams.hpp"
#include "argnet/nn/encoder.hpp"
#include "argnet/nn/layers.hpp"

namespace argnet::model {

using RowVector = Eigen::RowVectorXd;

/// Per-sample values of one ARG forward pass (eval mode).
struct ArgOutput {
    double y_hat = 0.5;
    double m_hat_t = 0.5, m_hat_c = 0.5;
    double u_hat_t = 0.5, u_hat_c = 0.5;
    double w_t = 0.5, w_c = 0.5;
    double w_x_cls = 0.5, w_t_cls = 0.5, w_c_cls = 0.5;
    RowVector x_pooled;
    RowVector f_t_to_x, f_x_to_t, f_c_to_x, f_x_to_c;
    RowVector f_t_prime, f_c_prime;
    RowVector f_cls;
};

struct LossBreakdown {
    double l_ce = 0, l_et = 0, l_ec = 0, l_pt = 0, l_pc = 0;
    double total = 0;
};

/// total = l_ce + beta1 (l_et + l_ec) + beta2 (l_pt + l_pc).
LossBreakdown total_loss(double l_ce, double l_et, double l_ec, double l_pt, double l_pc, double beta1, double beta2);

/// Adaptive rationale guidance network: a news encoder, a rationale encoder,
/// per-perspective interaction / judgment prediction / usefulness evaluation /
/// reweighting heads, attentive news pooling, weighted fusion and a classifier.
class ArgModel final : public DetectorModel {
public:
    /// Graph nodes of one pass; index 0 = textual description, 1 = commonsense.
    struct Trace {
        nn::SeqVar news;
        std::array<nn::SeqVar, 2> rationale;
        std::array<nn::Var, 2> f_r_to_x, f_x_to_r, m_hat, u_hat, w, f_prime;
        std::array<nn::Var, 3> w_cls;  // x, td, cs
        nn::Var x_pooled, f_cls, y_hat;
        bool has_loss = false;
        nn::Var l_ce;
        std::array<nn::Var, 2> l_e, l_p;
        nn::Var total;
    };

    ArgModel(const HyperParams& hp, std::uint64_t seed);

    ModelKind kind() const noexcept override { return ModelKind::Arg; }
    nn::ParameterSet& parameters() noexcept override { return params_; }
    const nn::ParameterSet& parameters() const noexcept override { return params_; }
    TrainStep training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const override;
    double predict(const data::SampleView& s) const override;
    bool needs_rationales() const noexcept override { return true; }
    std::vector<bool> trainable_mask() const override;
    nlohmann::json checkpoint_meta() const override;

    const HyperParams& hparams() const noexcept { return hp_; }
    void set_loss_weights(double beta1, double beta2) noexcept;

    /// Full pass. Losses are recorded when the sample carries a gold label.
    Trace trace(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const;
    /// Eval-mode pass; the breakdown is all zeros for unlabelled samples.
    std::pair<ArgOutput, LossBreakdown> forward(const data::SampleView& s) const;

    // Components, each recording into the caller's graph.
    nn::SeqVar encode_news(nn::Graph& g, std::string_view text, nn::Mode mode) const;
    nn::SeqVar encode_rationale(nn::Graph& g, data::Perspective p, std::string_view text, nn::Mode mode) const;
    /// (f_r->x, f_x->r): pooled CA(R, X, X) and pooled CA(X, R, R).
    std::pair<nn::Var, nn::Var> interact(nn::Graph& g, data::Perspective p, const nn::SeqVar& x,
                                         const nn::SeqVar& r) const;
    /// Probability that the LLM judged the item FAKE, from a mean pool of R.
    nn::Var predict_llm_judgment(nn::Graph& g, data::Perspective p, const nn::SeqVar& r, nn::Mode mode) const;
    nn::Var evaluate_usefulness(nn::Graph& g, data::Perspective p, nn::Var f_x_to_r, nn::Mode mode) const;
    /// (w * f_r->x, w) with w = sigmoid(MLP(f_x->r)).
    std::pair<nn::Var, nn::Var> reweight(nn::Graph& g, data::Perspective p, nn::Var f_r_to_x, nn::Var f_x_to_r,
                                         nn::Mode mode) const;
    nn::Var attentive_pool(nn::Graph& g, const nn::SeqVar& x) const;
    /// Sigmoid-squashed fusion weights (x, td, cs).
    std::array<nn::Var, 3> fusion_weights(nn::Graph& g) const;
    nn::Var classify(nn::Graph& g, nn::Var f_cls, nn::Mode mode) const;
    /// Eval-mode classifier probability for a given fusion vector.
    double classify_value(const RowVector& f_cls) const;

    const nn::TextEncoder& news_encoder() const noexcept { return *news_encoder_; }
    const nn::TextEncoder& rationale_encoder(data::Perspective p) const noexcept;

private:
    struct Branch {
        Branch(nn::ParameterSet& params, const std::string& prefix, const HyperParams& hp, nn::Rng& rng);
        nn::CrossAttention r_to_x;  // queries from the rationale, keys/values from the news
        nn::CrossAttention x_to_r;  // queries from the news, keys/values from the rationale
        nn::Mlp judge;
        nn::Mlp usefulness;
        nn::Mlp reweighter;
    };

    const Branch& branch(data::Perspective p) const noexcept {
        return p == data::Perspective::TextualDescription ? *td_ : *cs_;
    }

    HyperParams hp_;
    nn::ParameterSet params_;
    std::unique_ptr<nn::TextEncoder> news_encoder_;
    std::unique_ptr<nn::TextEncoder> rationale_encoder_;
    std::unique_ptr<nn::TextEncoder> rationale_encoder_cs_;  // only when not shared
    std::unique_ptr<Branch> td_, cs_;
    std::unique_ptr<nn::AttentivePool> news_pool_;
    const nn::Parameter* fusion_;
    std::unique_ptr<nn::Mlp> classifier_;
};

}  // namespace argnet::model
