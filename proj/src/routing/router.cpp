#include "argnet/routing/router.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::routing {

std::string_view to_string(ConfidenceKind k) noexcept { return k == ConfidenceKind::Entropy ? "entropy" : "max_prob"; }

ConfidenceKind parse_confidence_kind(std::string_view s) {
    if (s == "max_prob") return ConfidenceKind::MaxProb;
    if (s == "entropy") return ConfidenceKind::Entropy;
    throw ValidationError("unknown confidence kind '" + std::string(s) + "'");
}

double confidence(double y_hat) noexcept { return std::max(y_hat, 1.0 - y_hat); }

double entropy_confidence(double y_hat) noexcept {
    auto term = [](double p) { return p > 0 ? -p * std::log(p) : 0.0; };
    return 1.0 - (term(y_hat) + term(1.0 - y_hat)) / (2.0 * std::log(2.0));
}

double confidence(double y_hat, ConfidenceKind kind) noexcept {
    return kind == ConfidenceKind::Entropy ? entropy_confidence(y_hat) : confidence(y_hat);
}

RoutingResult route_predictions(std::span<const train::Prediction> argd,
                                const std::function<train::Prediction(std::size_t)>& arg_at, double threshold,
                                ConfidenceKind kind) {
    RoutingResult r;
    r.threshold = threshold;
    std::size_t routed = 0;
    for (std::size_t i = 0; i < argd.size(); ++i) {
        RoutingDecision d;
        d.news_id = argd[i].id;
        d.confidence = confidence(argd[i].y_hat, kind);
        train::Prediction p = argd[i];
        if (d.confidence < threshold) {
            d.routed_to = model::ModelKind::Arg;
            p = arg_at(i);
            if (p.id != argd[i].id) throw ValidationError("routing: prediction ids out of step at " + argd[i].id);
            ++routed;
        }
        d.final_pred = p.pred;
        r.decisions.push_back(std::move(d));
        r.predictions.push_back(std::move(p));
    }
    r.fraction_routed = argd.empty() ? 0.0 : static_cast<double>(routed) / static_cast<double>(argd.size());
    r.metrics = train::metrics_of(r.predictions);
    return r;
}

RoutingResult route(std::span<const data::EnrichedSample> samples, const model::DetectorModel& argd,
                    const model::DetectorModel& arg, double threshold, ConfidenceKind kind) {
    const auto argd_preds = train::predict_all(argd, samples);
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (confidence(argd_preds[i].y_hat, kind) < threshold && !samples[i].has_both_rationales()) {
            missing.push_back(samples[i].item.id);
        }
    }
    if (!missing.empty()) throw MissingFieldError("routed samples lack rationales", missing);
    return route_predictions(
        argd_preds,
        [&](std::size_t i) {
            const double y = arg.predict(data::SampleView(samples[i]));
            return train::Prediction{samples[i].item.id, y, train::decide(y), samples[i].item.label};
        },
        threshold, kind);
}

std::vector<double> default_threshold_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 50; ++i) g.push_back(0.5 + 0.5 * static_cast<double>(i) / 50.0);
    return g;
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("threshold grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] >= grid[i - 1])) throw ValidationError("threshold grid must be ascending");
    }
}

}  // namespace

RoutingCurve sweep_thresholds(std::span<const train::Prediction> argd, std::span<const train::Prediction> arg,
                              const std::vector<double>& grid, ConfidenceKind kind) {
    check_grid(grid);
    if (argd.size() != arg.size()) throw ValidationError("routing: prediction sets differ in size");
    RoutingCurve c;
    for (double t : grid) {
        auto r = route_predictions(argd, [&](std::size_t i) { return arg[i]; }, t, kind);
        c.points.push_back({t, r.fraction_routed, r.metrics});
    }
    return c;
}

RoutingCurve sweep_thresholds(std::span<const data::EnrichedSample> samples, const model::DetectorModel& argd,
                              const model::DetectorModel& arg, const std::vector<double>& grid,
                              ConfidenceKind kind) {
    check_grid(grid);
    const auto argd_preds = train::predict_all(argd, samples);
    // ARG runs only on samples the highest threshold routes.
    std::vector<std::optional<train::Prediction>> arg_preds(samples.size());
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (confidence(argd_preds[i].y_hat, kind) < grid.back() && !samples[i].has_both_rationales()) {
            missing.push_back(samples[i].item.id);
        }
    }
    if (!missing.empty()) throw MissingFieldError("routed samples lack rationales", missing);
    auto arg_at = [&](std::size_t i) {
        if (!arg_preds[i]) {
            const double y = arg.predict(data::SampleView(samples[i]));
            arg_preds[i] = train::Prediction{samples[i].item.id, y, train::decide(y), samples[i].item.label};
        }
        return *arg_preds[i];
    };
    RoutingCurve c;
    for (double t : grid) {
        auto r = route_predictions(argd_preds, arg_at, t, kind);
        c.points.push_back({t, r.fraction_routed, r.metrics});
    }
    return c;
}

std::string to_csv(const RoutingCurve& c) {
    std::string out = "threshold,fraction_routed,macro_f1,accuracy,f1_real,f1_fake\n";
    for (const auto& p : c.points) {
        out += fmt::format("{},{},{},{},{},{}\n", p.threshold, p.fraction_routed, p.metrics.macro_f1,
                           p.metrics.accuracy, p.metrics.f1_real, p.metrics.f1_fake);
    }
    return out;
}

RoutingCurve curve_from_csv(const std::string& csv) {
    RoutingCurve c;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != 6) throw ValidationError("routing csv row has " + std::to_string(v.size()) + " fields");
        RoutingPoint p;
        p.threshold = v[0];
        p.fraction_routed = v[1];
        p.metrics.macro_f1 = v[2];
        p.metrics.accuracy = v[3];
        p.metrics.f1_real = v[4];
        p.metrics.f1_fake = v[5];
        c.points.push_back(p);
    }
    return c;
}

void write_csv(const std::filesystem::path& path, const RoutingCurve& c) { util::write_text_atomic(path, to_csv(c)); }

}  // namespace argnet::routing
