#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>

#include "argnet/model/arg_model.hpp"
#include "argnet/model/checkpoint.hpp"

namespace argnet::distill {

using model::RowVector;

struct ArgDConfig {
    double lambda_kd = 1.0;
    int simulator_heads = 4;
    int simulator_blocks = 1;
    /// Keep the copied news encoder fixed during distillation.
    bool freeze_news_encoder = false;

    void validate(int d) const;
};

nlohmann::json to_json(const ArgDConfig& c);
ArgDConfig argd_config_from_json(const nlohmann::json& j);

/// Teacher fusion vectors keyed by news id.
using TeacherFeatures = std::unordered_map<std::string, RowVector>;

struct ArgDOutput {
    double y_hat = 0.5;
    RowVector f_cls_d;
};

/// Mean over dimensions of squared differences. Throws on a size mismatch.
double kd_loss(const RowVector& student, const RowVector& teacher);
nn::Var kd_loss(nn::Var student, nn::Var teacher);

/// Rationale-free student: news encoder and classifier taken from a trained
/// ARG, plus a transformer-block feature simulator and attentive pooling.
class ArgDModel final : public model::DetectorModel {
public:
    /// Fresh model; simulator and pooling drawn from `seed`.
    ArgDModel(const model::HyperParams& hp, const ArgDConfig& cfg, std::uint64_t seed);

    /// Copies news encoder and classifier tensors bit-for-bit from an ARG checkpoint.
    static std::unique_ptr<ArgDModel> init_from_arg(const model::CheckpointData& arg, const ArgDConfig& cfg,
                                                    std::uint64_t seed);
    static std::unique_ptr<ArgDModel> init_from_arg(const model::ArgModel& arg, const ArgDConfig& cfg,
                                                    std::uint64_t seed);

    model::ModelKind kind() const noexcept override { return model::ModelKind::ArgD; }
    nn::ParameterSet& parameters() noexcept override { return params_; }
    const nn::ParameterSet& parameters() const noexcept override { return params_; }
    /// L_ce + lambda_kd * L_kd; the kd term needs teacher features for the sample.
    model::TrainStep training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const override;
    double predict(const data::SampleView& s) const override;
    bool needs_rationales() const noexcept override { return false; }
    std::vector<bool> trainable_mask() const override;
    nlohmann::json checkpoint_meta() const override;

    ArgDOutput forward_argd(const data::NewsItem& item) const;
    /// Simulated fusion vector f_cls^d for a news text.
    nn::Var simulate(nn::Graph& g, std::string_view text, nn::Mode mode) const;
    nn::Var classify(nn::Graph& g, nn::Var f_cls_d, nn::Mode mode) const;

    /// Teacher vectors used by training_step; must outlive training.
    void set_teacher_features(const TeacherFeatures* features) noexcept { teacher_ = features; }
    /// Mean kd loss over items in eval mode.
    double mean_kd_loss(std::span<const data::EnrichedSample> samples) const;

    const model::HyperParams& hparams() const noexcept { return hp_; }
    const ArgDConfig& config() const noexcept { return cfg_; }
    void set_lambda_kd(double lambda) noexcept { cfg_.lambda_kd = lambda; }
    const nn::TextEncoder& news_encoder() const noexcept { return *news_encoder_; }

    /// Parameter-name prefixes shared with ARG.
    static const std::vector<std::string>& copied_prefixes();

private:
    model::HyperParams hp_;
    ArgDConfig cfg_;
    nn::ParameterSet params_;
    std::unique_ptr<nn::TextEncoder> news_encoder_;
    std::vector<nn::TransformerBlock> simulator_;
    std::unique_ptr<nn::AttentivePool> pool_;
    std::unique_ptr<nn::Mlp> classifier_;
    const TeacherFeatures* teacher_ = nullptr;
};

}  // namespace argnet::distill
