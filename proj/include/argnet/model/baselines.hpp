#pragma once

#include <cstdint>
#include <memory>

#include "argnet/model/detector.hpp"
#include "argnet/model/hyperparams.hpp"
#include "argnet/nn/encoder.hpp"

namespace argnet::model {

/// News encoder, attentive pooling, MLP classifier. Never reads rationales.
class BaselineModel final : public DetectorModel {
public:
    BaselineModel(const HyperParams& hp, std::uint64_t seed);

    ModelKind kind() const noexcept override { return ModelKind::Baseline; }
    nn::ParameterSet& parameters() noexcept override { return params_; }
    const nn::ParameterSet& parameters() const noexcept override { return params_; }
    TrainStep training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const override;
    double predict(const data::SampleView& s) const override;
    bool needs_rationales() const noexcept override { return false; }
    std::vector<bool> trainable_mask() const override;
    nlohmann::json checkpoint_meta() const override;

    nn::Var forward(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const;

private:
    HyperParams hp_;
    nn::ParameterSet params_;
    std::unique_ptr<nn::TextEncoder> news_encoder_;
    std::unique_ptr<nn::AttentivePool> pool_;
    std::unique_ptr<nn::Mlp> classifier_;
};

/// Attentive-pooled news features concatenated with mean-pooled td and cs
/// rationale features (one shared rationale encoder), then an MLP.
class BaselinePlusRationaleModel final : public DetectorModel {
public:
    BaselinePlusRationaleModel(const HyperParams& hp, std::uint64_t seed);

    ModelKind kind() const noexcept override { return ModelKind::BaselinePlusRationale; }
    nn::ParameterSet& parameters() noexcept override { return params_; }
    const nn::ParameterSet& parameters() const noexcept override { return params_; }
    TrainStep training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const override;
    double predict(const data::SampleView& s) const override;
    bool needs_rationales() const noexcept override { return true; }
    std::vector<bool> trainable_mask() const override;
    nlohmann::json checkpoint_meta() const override;

    /// The 1 x 3d concatenated feature.
    nn::Var features(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const;
    nn::Var forward(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const;

private:
    HyperParams hp_;
    nn::ParameterSet params_;
    std::unique_ptr<nn::TextEncoder> news_encoder_;
    std::unique_ptr<nn::TextEncoder> rationale_encoder_;
    std::unique_ptr<nn::AttentivePool> pool_;
    std::unique_ptr<nn::Mlp> classifier_;
};

}  // namespace argnet::model
