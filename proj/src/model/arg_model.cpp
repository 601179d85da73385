#include "argnet/model/arg_model.hpp"

#include "argnet/nn/ops.hpp"
#include "argnet/util/error.hpp"

namespace argnet::model {

namespace ops = nn::ops;
using data::Perspective;

namespace {

constexpr std::array<Perspective, 2> kPerspectives{Perspective::TextualDescription, Perspective::Commonsense};

std::size_t slot(Perspective p) { return p == Perspective::TextualDescription ? 0 : 1; }

double prob(const nn::Var& v) { return ops::clamp_prob(v.scalar()); }

RowVector row(const nn::Var& v) { return v.value().row(0); }

}  // namespace

LossBreakdown total_loss(double l_ce, double l_et, double l_ec, double l_pt, double l_pc, double beta1,
                         double beta2) {
    LossBreakdown b{l_ce, l_et, l_ec, l_pt, l_pc, 0.0};
    b.total = l_ce + beta1 * (l_et + l_ec) + beta2 * (l_pt + l_pc);
    return b;
}

ArgModel::Branch::Branch(nn::ParameterSet& params, const std::string& prefix, const HyperParams& hp, nn::Rng& rng)
    : r_to_x(params, prefix + ".r_to_x", hp.d, rng),
      x_to_r(params, prefix + ".x_to_r", hp.d, rng),
      judge(params, prefix + ".judge", hp.d, hp.hidden(), 1, hp.dropout, rng),
      usefulness(params, prefix + ".usefulness", hp.d, hp.hidden(), 1, hp.dropout, rng),
      reweighter(params, prefix + ".reweight", hp.d, hp.hidden(), 1, hp.dropout, rng) {}

ArgModel::ArgModel(const HyperParams& hp, std::uint64_t seed) : hp_(hp) {
    hp_.validate();
    nn::Rng rng(seed);
    const auto enc = hp_.encoder_config();
    news_encoder_ = std::make_unique<nn::TextEncoder>(params_, "news_encoder", enc, rng);
    if (hp_.shared_rationale_encoder) {
        rationale_encoder_ = std::make_unique<nn::TextEncoder>(params_, "rationale_encoder", enc, rng);
    } else {
        rationale_encoder_ = std::make_unique<nn::TextEncoder>(params_, "rationale_encoder_td", enc, rng);
        rationale_encoder_cs_ = std::make_unique<nn::TextEncoder>(params_, "rationale_encoder_cs", enc, rng);
    }
    td_ = std::make_unique<Branch>(params_, "td", hp_, rng);
    cs_ = std::make_unique<Branch>(params_, "cs", hp_, rng);
    news_pool_ = std::make_unique<nn::AttentivePool>(params_, "news_pool", hp_.d, rng);
    fusion_ = &params_.add("fusion.raw", nn::Matrix::Zero(1, 3));
    classifier_ = std::make_unique<nn::Mlp>(params_, "classifier", hp_.d, hp_.hidden(), 1, hp_.dropout, rng);
}

void ArgModel::set_loss_weights(double beta1, double beta2) noexcept {
    hp_.beta1 = beta1;
    hp_.beta2 = beta2;
}

const nn::TextEncoder& ArgModel::rationale_encoder(Perspective p) const noexcept {
    if (rationale_encoder_cs_ && p == Perspective::Commonsense) return *rationale_encoder_cs_;
    return *rationale_encoder_;
}

nn::SeqVar ArgModel::encode_news(nn::Graph& g, std::string_view text, nn::Mode mode) const {
    return news_encoder_->forward(g, text, mode);
}

nn::SeqVar ArgModel::encode_rationale(nn::Graph& g, Perspective p, std::string_view text, nn::Mode mode) const {
    return rationale_encoder(p).forward(g, text, mode);
}

std::pair<nn::Var, nn::Var> ArgModel::interact(nn::Graph& g, Perspective p, const nn::SeqVar& x,
                                               const nn::SeqVar& r) const {
    const Branch& b = branch(p);
    nn::SeqVar r_to_x = b.r_to_x.forward(g, r, x, x);
    nn::SeqVar x_to_r = b.x_to_r.forward(g, x, r, r);
    return {ops::masked_mean_rows(r_to_x.values, r_to_x.mask), ops::masked_mean_rows(x_to_r.values, x_to_r.mask)};
}

nn::Var ArgModel::predict_llm_judgment(nn::Graph& g, Perspective p, const nn::SeqVar& r, nn::Mode mode) const {
    nn::Var pooled = ops::masked_mean_rows(r.values, r.mask);
    return ops::sigmoid(branch(p).judge.forward(g, pooled, mode));
}

nn::Var ArgModel::evaluate_usefulness(nn::Graph& g, Perspective p, nn::Var f_x_to_r, nn::Mode mode) const {
    return ops::sigmoid(branch(p).usefulness.forward(g, f_x_to_r, mode));
}

std::pair<nn::Var, nn::Var> ArgModel::reweight(nn::Graph& g, Perspective p, nn::Var f_r_to_x, nn::Var f_x_to_r,
                                               nn::Mode mode) const {
    nn::Var w = ops::sigmoid(branch(p).reweighter.forward(g, f_x_to_r, mode));
    return {ops::mul_scalar(w, f_r_to_x), w};
}

nn::Var ArgModel::attentive_pool(nn::Graph& g, const nn::SeqVar& x) const { return news_pool_->forward(g, x); }

std::array<nn::Var, 3> ArgModel::fusion_weights(nn::Graph& g) const {
    nn::Var w = ops::sigmoid(g.param(*fusion_));
    return {ops::slice_cols(w, 0, 1), ops::slice_cols(w, 1, 1), ops::slice_cols(w, 2, 1)};
}

nn::Var ArgModel::classify(nn::Graph& g, nn::Var f_cls, nn::Mode mode) const {
    return ops::sigmoid(classifier_->forward(g, f_cls, mode));
}

double ArgModel::classify_value(const RowVector& f_cls) const {
    nn::Graph g;
    return prob(classify(g, g.constant(f_cls), nn::eval_mode()));
}

ArgModel::Trace ArgModel::trace(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    Trace t;
    const data::NewsItem& item = s.news();
    t.news = encode_news(g, item.text, mode);
    for (Perspective p : kPerspectives) {
        const std::size_t i = slot(p);
        const data::RationaleRecord& rec = s.rationale(p);
        t.rationale[i] = encode_rationale(g, p, rec.rationale_text, mode);
        std::tie(t.f_r_to_x[i], t.f_x_to_r[i]) = interact(g, p, t.news, t.rationale[i]);
        t.m_hat[i] = predict_llm_judgment(g, p, t.rationale[i], mode);
        t.u_hat[i] = evaluate_usefulness(g, p, t.f_x_to_r[i], mode);
        std::tie(t.f_prime[i], t.w[i]) = reweight(g, p, t.f_r_to_x[i], t.f_x_to_r[i], mode);
    }
    t.x_pooled = attentive_pool(g, t.news);
    t.w_cls = fusion_weights(g);
    t.f_cls = ops::add(ops::add(ops::mul_scalar(t.w_cls[0], t.x_pooled), ops::mul_scalar(t.w_cls[1], t.f_prime[0])),
                       ops::mul_scalar(t.w_cls[2], t.f_prime[1]));
    t.y_hat = classify(g, t.f_cls, mode);

    if (!item.label) return t;
    t.has_loss = true;
    t.l_ce = ops::bce(t.y_hat, data::to_int(*item.label));
    for (Perspective p : kPerspectives) {
        const std::size_t i = slot(p);
        const data::RationaleRecord& rec = s.rationale(p);
        // A refusal has no judgment to imitate; its usefulness label is 0.
        t.l_p[i] = rec.llm_judgment ? ops::bce(t.m_hat[i], data::to_int(*rec.llm_judgment)) : g.scalar(0.0);
        auto u = rec.usefulness ? rec.usefulness : data::usefulness_for(rec.llm_judgment, item.label);
        t.l_e[i] = ops::bce(t.u_hat[i], u.value_or(0));
    }
    t.total = ops::add(ops::add(t.l_ce, ops::scale(ops::add(t.l_e[0], t.l_e[1]), hp_.beta1)),
                       ops::scale(ops::add(t.l_p[0], t.l_p[1]), hp_.beta2));
    return t;
}

std::pair<ArgOutput, LossBreakdown> ArgModel::forward(const data::SampleView& s) const {
    nn::Graph g;
    Trace t = trace(g, s, nn::eval_mode());
    ArgOutput o;
    o.y_hat = prob(t.y_hat);
    o.m_hat_t = prob(t.m_hat[0]);
    o.m_hat_c = prob(t.m_hat[1]);
    o.u_hat_t = prob(t.u_hat[0]);
    o.u_hat_c = prob(t.u_hat[1]);
    o.w_t = t.w[0].scalar();
    o.w_c = t.w[1].scalar();
    o.w_x_cls = t.w_cls[0].scalar();
    o.w_t_cls = t.w_cls[1].scalar();
    o.w_c_cls = t.w_cls[2].scalar();
    o.x_pooled = row(t.x_pooled);
    o.f_t_to_x = row(t.f_r_to_x[0]);
    o.f_x_to_t = row(t.f_x_to_r[0]);
    o.f_c_to_x = row(t.f_r_to_x[1]);
    o.f_x_to_c = row(t.f_x_to_r[1]);
    o.f_t_prime = row(t.f_prime[0]);
    o.f_c_prime = row(t.f_prime[1]);
    o.f_cls = row(t.f_cls);
    LossBreakdown b;
    if (t.has_loss) {
        b = total_loss(t.l_ce.scalar(), t.l_e[0].scalar(), t.l_e[1].scalar(), t.l_p[0].scalar(), t.l_p[1].scalar(),
                       hp_.beta1, hp_.beta2);
    }
    return {std::move(o), b};
}

TrainStep ArgModel::training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    Trace t = trace(g, s, mode);
    if (!t.has_loss) throw ValidationError("training sample " + s.news().id + " has no gold label");
    return {t.total, t.y_hat.scalar()};
}

double ArgModel::predict(const data::SampleView& s) const {
    nn::Graph g;
    return prob(trace(g, s, nn::eval_mode()).y_hat);
}

std::vector<bool> ArgModel::trainable_mask() const {
    if (!hp_.freeze_encoders) return DetectorModel::trainable_mask();
    return freeze_prefixes(params_, {"news_encoder.", "rationale_encoder"});
}

nlohmann::json ArgModel::checkpoint_meta() const {
    nlohmann::json enc{{"news", news_encoder_->identifier()}, {"rationale", rationale_encoder_->identifier()}};
    return {{"hyperparams", to_json(hp_)}, {"encoders", enc}};
}

}  // namespace argnet::model
