#pragma once

#include <string_view>
#include <vector>

#include "argnet/data/sample_view.hpp"
#include "argnet/nn/graph.hpp"
#include "json.hpp"

namespace argnet::model {

enum class ModelKind { Arg, ArgD, Baseline, BaselinePlusRationale };

std::string_view to_string(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view s);

struct TrainStep {
    nn::Var loss;
    double y_hat = 0.5;
};

/// Common surface the trainer, evaluator and router work against.
/// Implementations are single-writer during training; const members are
/// safe for concurrent readers.
class DetectorModel {
public:
    virtual ~DetectorModel() = default;

    virtual ModelKind kind() const noexcept = 0;
    virtual nn::ParameterSet& parameters() noexcept = 0;
    virtual const nn::ParameterSet& parameters() const noexcept = 0;

    /// Records the forward pass for one labelled sample and returns its loss.
    virtual TrainStep training_step(nn::Graph& g, const data::SampleView& s, nn::Mode mode) const = 0;
    /// Eval-mode probability that the item is FAKE, clamped into (0, 1).
    virtual double predict(const data::SampleView& s) const = 0;
    virtual bool needs_rationales() const noexcept = 0;
    /// Per-parameter update mask. Defaults to everything trainable.
    virtual std::vector<bool> trainable_mask() const;
    /// Everything besides tensors needed to rebuild the model.
    virtual nlohmann::json checkpoint_meta() const = 0;
};

/// Mask that freezes every parameter whose name starts with one of `prefixes`.
std::vector<bool> freeze_prefixes(const nn::ParameterSet& params, const std::vector<std::string>& prefixes);

}  // namespace argnet::model
