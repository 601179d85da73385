#include "argnet/model/baselines.hpp"

#include "argnet/nn/ops.hpp"
#include "argnet/util/error.hpp"

namespace argnet::model {

namespace ops = nn::ops;

namespace {

TrainStep labelled_step(const data::SampleView& s, nn::Var y_hat) {
    const auto& item = s.news();
    if (!item.label) throw ValidationError("training sample " + item.id + " has no gold label");
    return {ops::bce(y_hat, data::to_int(*item.label)), y_hat.scalar()};
}

}  // namespace

BaselineModel::BaselineModel(const HyperParams& hp, std::uint64_t seed) : hp_(hp) {
    hp_.validate();
    nn::Rng rng(seed);
    news_encoder_ = std::make_unique<nn::TextEncoder>(params_, "news_encoder", hp_.encoder_config(), rng);
    pool_ = std::make_unique<nn::AttentivePool>(params_, "news_pool", hp_.d, rng);
    classifier_ = std::make_unique<nn::Mlp>(params_, "classifier", hp_.d, hp_.hidden(), 1, hp_.dropout, rng);
}

nn::Var BaselineModel::forward(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    nn::SeqVar x = news_encoder_->forward(g, s.news().text, mode);
    return ops::sigmoid(classifier_->forward(g, pool_->forward(g, x), mode));
}

TrainStep BaselineModel::training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    return labelled_step(s, forward(g, s, mode));
}

double BaselineModel::predict(const data::SampleView& s) const {
    nn::Graph g;
    return ops::clamp_prob(forward(g, s, nn::eval_mode()).scalar());
}

std::vector<bool> BaselineModel::trainable_mask() const {
    if (!hp_.freeze_encoders) return DetectorModel::trainable_mask();
    return freeze_prefixes(params_, {"news_encoder."});
}

nlohmann::json BaselineModel::checkpoint_meta() const {
    return {{"hyperparams", to_json(hp_)}, {"encoders", {{"news", news_encoder_->identifier()}}}};
}

BaselinePlusRationaleModel::BaselinePlusRationaleModel(const HyperParams& hp, std::uint64_t seed) : hp_(hp) {
    hp_.validate();
    nn::Rng rng(seed);
    const auto enc = hp_.encoder_config();
    news_encoder_ = std::make_unique<nn::TextEncoder>(params_, "news_encoder", enc, rng);
    rationale_encoder_ = std::make_unique<nn::TextEncoder>(params_, "rationale_encoder", enc, rng);
    pool_ = std::make_unique<nn::AttentivePool>(params_, "news_pool", hp_.d, rng);
    classifier_ = std::make_unique<nn::Mlp>(params_, "classifier", 3 * hp_.d, hp_.hidden(), 1, hp_.dropout, rng);
}

nn::Var BaselinePlusRationaleModel::features(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    nn::SeqVar x = news_encoder_->forward(g, s.news().text, mode);
    std::vector<nn::Var> parts{pool_->forward(g, x)};
    for (auto p : {data::Perspective::TextualDescription, data::Perspective::Commonsense}) {
        nn::SeqVar r = rationale_encoder_->forward(g, s.rationale(p).rationale_text, mode);
        parts.push_back(ops::masked_mean_rows(r.values, r.mask));
    }
    return ops::concat_cols(parts);
}

nn::Var BaselinePlusRationaleModel::forward(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    return ops::sigmoid(classifier_->forward(g, features(g, s, mode), mode));
}

TrainStep BaselinePlusRationaleModel::training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    return labelled_step(s, forward(g, s, mode));
}

double BaselinePlusRationaleModel::predict(const data::SampleView& s) const {
    nn::Graph g;
    return ops::clamp_prob(forward(g, s, nn::eval_mode()).scalar());
}

std::vector<bool> BaselinePlusRationaleModel::trainable_mask() const {
    if (!hp_.freeze_encoders) return DetectorModel::trainable_mask();
    return freeze_prefixes(params_, {"news_encoder.", "rationale_encoder."});
}

nlohmann::json BaselinePlusRationaleModel::checkpoint_meta() const {
    return {{"hyperparams", to_json(hp_)},
            {"encoders", {{"news", news_encoder_->identifier()}, {"rationale", rationale_encoder_->identifier()}}}};
}

}  // namespace argnet::model
