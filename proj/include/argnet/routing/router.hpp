#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "argnet/model/detector.hpp"
#include "argnet/train/trainer.hpp"

namespace argnet::routing {

enum class ConfidenceKind { MaxProb, Entropy };

std::string_view to_string(ConfidenceKind k) noexcept;
ConfidenceKind parse_confidence_kind(std::string_view s);

/// max(y_hat, 1 - y_hat).
double confidence(double y_hat) noexcept;
/// 1 - H(y_hat) / (2 ln 2): also 0.5 at y_hat = 0.5 and 1 at certainty.
double entropy_confidence(double y_hat) noexcept;
double confidence(double y_hat, ConfidenceKind kind) noexcept;

struct RoutingDecision {
    std::string news_id;
    double confidence = 0.5;
    model::ModelKind routed_to = model::ModelKind::ArgD;
    data::Label final_pred = data::Label::Real;
};

struct RoutingResult {
    double threshold = 0.5;
    std::vector<RoutingDecision> decisions;
    std::vector<train::Prediction> predictions;  // combined, in sample order
    data::MetricsReport metrics;
    double fraction_routed = 0;
};

/// Samples whose ARG-D confidence is below `threshold` take the ARG
/// prediction; `arg_at(i)` is consulted only for those.
RoutingResult route_predictions(std::span<const train::Prediction> argd,
                                const std::function<train::Prediction(std::size_t)>& arg_at, double threshold,
                                ConfidenceKind kind = ConfidenceKind::MaxProb);

/// Runs both models. Routed samples must carry both rationales; otherwise
/// MissingFieldError lists them before ARG runs.
RoutingResult route(std::span<const data::EnrichedSample> samples, const model::DetectorModel& argd,
                    const model::DetectorModel& arg, double threshold, ConfidenceKind kind = ConfidenceKind::MaxProb);

struct RoutingPoint {
    double threshold = 0;
    double fraction_routed = 0;
    data::MetricsReport metrics;
};

struct RoutingCurve {
    std::vector<RoutingPoint> points;
};

/// 51 evenly spaced thresholds over [0.5, 1.0].
std::vector<double> default_threshold_grid();

/// One routing evaluation per threshold (grid must be ascending). Each model
/// runs at most once per sample.
RoutingCurve sweep_thresholds(std::span<const data::EnrichedSample> samples, const model::DetectorModel& argd,
                              const model::DetectorModel& arg, const std::vector<double>& grid,
                              ConfidenceKind kind = ConfidenceKind::MaxProb);
/// Same sweep from precomputed predictions (ARG predictions for every sample).
RoutingCurve sweep_thresholds(std::span<const train::Prediction> argd, std::span<const train::Prediction> arg,
                              const std::vector<double>& grid, ConfidenceKind kind = ConfidenceKind::MaxProb);

/// threshold,fraction_routed,macro_f1,accuracy,f1_real,f1_fake
std::string to_csv(const RoutingCurve& c);
RoutingCurve curve_from_csv(const std::string& csv);
void write_csv(const std::filesystem::path& path, const RoutingCurve& c);

}  // namespace argnet::routing
