#pragma once

#include <cstdint>
#include <span>

#include "argnet/data/types.hpp"

namespace argnet::data {

/// Confusion counts, named gold_as_predicted.
struct Confusion {
    std::int64_t real_as_real = 0;
    std::int64_t real_as_fake = 0;
    std::int64_t fake_as_real = 0;
    std::int64_t fake_as_fake = 0;

    std::int64_t total() const noexcept { return real_as_real + real_as_fake + fake_as_real + fake_as_fake; }
    bool operator==(const Confusion&) const = default;
};

struct MetricsReport {
    double macro_f1 = 0;
    double accuracy = 0;
    double f1_real = 0;
    double f1_fake = 0;
    Confusion confusion;

    bool operator==(const MetricsReport&) const = default;
};

/// Per-class F1 with empty precision/recall denominators contributing 0.
MetricsReport compute_metrics(std::span<const Label> preds, std::span<const Label> golds);

MetricsReport metrics_from_confusion(const Confusion& c);

nlohmann::json to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

}  // namespace argnet::data
