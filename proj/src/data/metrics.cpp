#include "argnet/data/metrics.hpp"

#include "argnet/util/error.hpp"

namespace argnet::data {

namespace {

double f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

MetricsReport metrics_from_confusion(const Confusion& c) {
    MetricsReport m;
    m.confusion = c;
    const auto n = c.total();
    m.accuracy = n ? static_cast<double>(c.real_as_real + c.fake_as_fake) / static_cast<double>(n) : 0.0;
    m.f1_real = f1(c.real_as_real, c.fake_as_real, c.real_as_fake);
    m.f1_fake = f1(c.fake_as_fake, c.real_as_fake, c.fake_as_real);
    m.macro_f1 = (m.f1_real + m.f1_fake) / 2.0;
    return m;
}

MetricsReport compute_metrics(std::span<const Label> preds, std::span<const Label> golds) {
    if (preds.size() != golds.size()) {
        throw ValidationError("compute_metrics: " + std::to_string(preds.size()) + " predictions vs " +
                              std::to_string(golds.size()) + " gold labels");
    }
    if (preds.empty()) throw ValidationError("compute_metrics: empty input");
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool gold_fake = golds[i] == Label::Fake;
        const bool pred_fake = preds[i] == Label::Fake;
        if (gold_fake) {
            (pred_fake ? c.fake_as_fake : c.fake_as_real)++;
        } else {
            (pred_fake ? c.real_as_fake : c.real_as_real)++;
        }
    }
    return metrics_from_confusion(c);
}

nlohmann::json to_json(const MetricsReport& m) {
    return {
        {"macro_f1", m.macro_f1},
        {"accuracy", m.accuracy},
        {"f1_real", m.f1_real},
        {"f1_fake", m.f1_fake},
        {"real_as_real", m.confusion.real_as_real},
        {"real_as_fake", m.confusion.real_as_fake},
        {"fake_as_real", m.confusion.fake_as_real},
        {"fake_as_fake", m.confusion.fake_as_fake},
    };
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
    Confusion c;
    c.real_as_real = j.at("real_as_real").get<std::int64_t>();
    c.real_as_fake = j.at("real_as_fake").get<std::int64_t>();
    c.fake_as_real = j.at("fake_as_real").get<std::int64_t>();
    c.fake_as_fake = j.at("fake_as_fake").get<std::int64_t>();
    return metrics_from_confusion(c);
}

}  // namespace argnet::data
