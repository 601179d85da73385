#include "argnet/distill/argd_model.hpp"

#include "argnet/nn/ops.hpp"
#include "argnet/util/error.hpp"

namespace argnet::distill {

namespace ops = nn::ops;

void ArgDConfig::validate(int d) const {
    if (!(lambda_kd >= 0.0)) throw ValidationError("lambda_kd must be >= 0");
    if (simulator_blocks < 1) throw ValidationError("simulator_blocks must be >= 1");
    if (simulator_heads < 1 || d % simulator_heads != 0) {
        throw ValidationError("simulator_heads must divide d (" + std::to_string(d) + ")");
    }
}

nlohmann::json to_json(const ArgDConfig& c) {
    return {{"lambda_kd", c.lambda_kd},
            {"simulator_heads", c.simulator_heads},
            {"simulator_blocks", c.simulator_blocks},
            {"freeze_news_encoder", c.freeze_news_encoder}};
}

ArgDConfig argd_config_from_json(const nlohmann::json& j) {
    ArgDConfig c;
    c.lambda_kd = j.value("lambda_kd", c.lambda_kd);
    c.simulator_heads = j.value("simulator_heads", c.simulator_heads);
    c.simulator_blocks = j.value("simulator_blocks", c.simulator_blocks);
    c.freeze_news_encoder = j.value("freeze_news_encoder", c.freeze_news_encoder);
    return c;
}

double kd_loss(const RowVector& student, const RowVector& teacher) {
    if (student.size() != teacher.size() || student.size() == 0) {
        throw ValidationError("kd_loss: dimension mismatch " + std::to_string(student.size()) + " vs " +
                              std::to_string(teacher.size()));
    }
    return (student - teacher).squaredNorm() / static_cast<double>(student.size());
}

nn::Var kd_loss(nn::Var student, nn::Var teacher) {
    if (student.rows() != teacher.rows() || student.cols() != teacher.cols()) {
        throw ValidationError("kd_loss: dimension mismatch");
    }
    return ops::mse(student, teacher);
}

const std::vector<std::string>& ArgDModel::copied_prefixes() {
    static const std::vector<std::string> prefixes{"news_encoder.", "classifier."};
    return prefixes;
}

ArgDModel::ArgDModel(const model::HyperParams& hp, const ArgDConfig& cfg, std::uint64_t seed) : hp_(hp), cfg_(cfg) {
    hp_.validate();
    cfg_.validate(hp_.d);
    nn::Rng rng(seed);
    news_encoder_ = std::make_unique<nn::TextEncoder>(params_, "news_encoder", hp_.encoder_config(), rng);
    for (int b = 0; b < cfg_.simulator_blocks; ++b) {
        simulator_.emplace_back(params_, "simulator.block" + std::to_string(b), hp_.d, cfg_.simulator_heads,
                                hp_.ffn_mult * hp_.d, hp_.dropout, rng);
    }
    pool_ = std::make_unique<nn::AttentivePool>(params_, "simulator_pool", hp_.d, rng);
    classifier_ = std::make_unique<nn::Mlp>(params_, "classifier", hp_.d, hp_.hidden(), 1, hp_.dropout, rng);
}

std::unique_ptr<ArgDModel> ArgDModel::init_from_arg(const model::CheckpointData& arg, const ArgDConfig& cfg,
                                                    std::uint64_t seed) {
    if (arg.kind != model::to_string(model::ModelKind::Arg)) {
        throw CheckpointError("expected an arg checkpoint, got kind '" + arg.kind + "' (format version " +
                              std::to_string(arg.major) + "." + std::to_string(arg.minor) + ")");
    }
    auto hp = model::hyperparams_from_json(arg.meta.at("hyperparams"));
    auto m = std::make_unique<ArgDModel>(hp, cfg, seed);
    model::load_parameters(arg, m->params_, copied_prefixes());
    return m;
}

std::unique_ptr<ArgDModel> ArgDModel::init_from_arg(const model::ArgModel& arg, const ArgDConfig& cfg,
                                                    std::uint64_t seed) {
    auto m = std::make_unique<ArgDModel>(arg.hparams(), cfg, seed);
    const auto& src = arg.parameters();
    for (std::size_t i = 0; i < src.size(); ++i) {
        for (const auto& pre : copied_prefixes()) {
            if (src[i].name.rfind(pre, 0) != 0) continue;
            nn::Parameter* dst = m->params_.find(src[i].name);
            if (!dst) throw CheckpointError("distilled model has no parameter named " + src[i].name);
            dst->value = src[i].value;
        }
    }
    return m;
}

nn::Var ArgDModel::simulate(nn::Graph& g, std::string_view text, nn::Mode mode) const {
    nn::SeqVar h = news_encoder_->forward(g, text, mode);
    for (const auto& block : simulator_) h = block.forward(g, h, mode);
    return pool_->forward(g, h);
}

nn::Var ArgDModel::classify(nn::Graph& g, nn::Var f_cls_d, nn::Mode mode) const {
    return ops::sigmoid(classifier_->forward(g, f_cls_d, mode));
}

ArgDOutput ArgDModel::forward_argd(const data::NewsItem& item) const {
    nn::Graph g;
    nn::Var f = simulate(g, item.text, nn::eval_mode());
    nn::Var y = classify(g, f, nn::eval_mode());
    return {ops::clamp_prob(y.scalar()), f.value().row(0)};
}

model::TrainStep ArgDModel::training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const {
    const data::NewsItem& item = s.news();
    if (!item.label) throw ValidationError("training sample " + item.id + " has no gold label");
    nn::Var f = simulate(g, item.text, mode);
    nn::Var y = classify(g, f, mode);
    nn::Var loss = ops::bce(y, data::to_int(*item.label));
    if (cfg_.lambda_kd > 0.0) {
        if (!teacher_) throw ValidationError("distillation needs teacher features (lambda_kd > 0)");
        auto it = teacher_->find(item.id);
        if (it == teacher_->end()) throw MissingFieldError("no teacher features for sample", {item.id});
        loss = ops::add(loss, ops::scale(kd_loss(f, g.constant(it->second)), cfg_.lambda_kd));
    }
    return {loss, y.scalar()};
}

double ArgDModel::predict(const data::SampleView& s) const { return forward_argd(s.news()).y_hat; }

double ArgDModel::mean_kd_loss(std::span<const data::EnrichedSample> samples) const {
    if (!teacher_) throw ValidationError("mean_kd_loss needs teacher features");
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : samples) {
        auto it = teacher_->find(s.item.id);
        if (it == teacher_->end()) throw MissingFieldError("no teacher features for sample", {s.item.id});
        sum += kd_loss(forward_argd(s.item).f_cls_d, it->second);
    }
    return sum / static_cast<double>(samples.size());
}

std::vector<bool> ArgDModel::trainable_mask() const {
    if (!cfg_.freeze_news_encoder && !hp_.freeze_encoders) return DetectorModel::trainable_mask();
    return model::freeze_prefixes(params_, {"news_encoder."});
}

nlohmann::json ArgDModel::checkpoint_meta() const {
    return {{"hyperparams", model::to_json(hp_)},
            {"argd", to_json(cfg_)},
            {"encoders", {{"news", news_encoder_->identifier()}}}};
}

}  // namespace argnet::distill
