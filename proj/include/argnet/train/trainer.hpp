#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "argnet/data/sample_view.hpp"
#include "argnet/distill/argd_model.hpp"
#include "argnet/model/detector.hpp"
#include "argnet/nn/adam.hpp"
#include "argnet/train/run_record.hpp"

namespace argnet::train {

struct TrainConfig {
    std::vector<double> lr_grid{2e-5, 5e-5, 1e-4};
    std::vector<double> beta1_grid{0.5, 1.0, 2.0};   // ARG only
    std::vector<double> beta2_grid{0.5, 1.0, 2.0};   // ARG only
    std::vector<double> lambda_grid{0.5, 1.0, 2.0};  // ARG-D only
    int max_epochs = 20;
    int batch_size = 64;
    int early_stop_patience = 3;
    std::uint64_t seed = 42;
    nn::AdamConfig adam;

    void validate() const;
    /// Grid cells for a model kind, lr outermost.
    std::vector<GridCell> grid(model::ModelKind kind) const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct Prediction {
    std::string id;
    double y_hat = 0.5;
    data::Label pred = data::Label::Real;
    std::optional<data::Label> gold;
};

/// FAKE iff y_hat > 0.5.
inline data::Label decide(double y_hat) noexcept { return y_hat > 0.5 ? data::Label::Fake : data::Label::Real; }

/// Eval-mode predictions. `audit` (optional) records field reads.
std::vector<Prediction> predict_all(const model::DetectorModel& m, std::span<const data::EnrichedSample> samples,
                                    data::AccessAudit* audit = nullptr);
/// Requires gold labels on every prediction.
data::MetricsReport metrics_of(std::span<const Prediction> preds);
data::MetricsReport evaluate(const model::DetectorModel& m, std::span<const data::EnrichedSample> samples,
                             data::AccessAudit* audit = nullptr);

nlohmann::json to_json(const Prediction& p);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds);

/// Throws MissingFieldError listing every sample lacking a rationale.
void require_rationales(const data::DatasetSplit& split);

struct TrainResult {
    std::unique_ptr<model::DetectorModel> model;
    RunRecord record;
};

using ModelFactory = std::function<std::unique_ptr<model::DetectorModel>(const GridCell&)>;
/// Called after each epoch's validation pass; may fill extra fields.
using EpochHook = std::function<void(const model::DetectorModel&, EpochRecord&)>;

/// Grid search with early stopping on validation macro F1. Each cell starts
/// from factory(cell); the best-validation state of the best cell is
/// returned and scored on test exactly once. A cell whose loss turns
/// non-finite is abandoned and recorded as diverged.
TrainResult train(model::ModelKind kind, const ModelFactory& factory, const data::DatasetSplit& split,
                  const TrainConfig& cfg, const EpochHook& hook = {});

/// Convenience for ARG and the baselines: fresh models from `hp`.
TrainResult train(model::ModelKind kind, const model::HyperParams& hp, const data::DatasetSplit& split,
                  const TrainConfig& cfg);

struct DistillOptions {
    distill::ArgDConfig argd;
    /// Teacher feature cache file; empty keeps features in memory only.
    std::filesystem::path feature_cache;
};

struct DistillResult {
    TrainResult result;
    std::size_t teacher_forwards = 0;
};

/// Trains ARG-D from a saved ARG checkpoint (never modified). Teacher
/// fusion vectors for train and val are computed once (or loaded from the
/// cache); each epoch records the mean validation kd loss.
DistillResult distill(const std::filesystem::path& teacher_checkpoint, const data::DatasetSplit& split,
                      const TrainConfig& cfg, const DistillOptions& opts);

}  // namespace argnet::train
