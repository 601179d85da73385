#include <random>
#include <set>

#include "doctest.h"
#include "arg_checks.hpp"

#include "argnet/routing/overlap.hpp"
#include "argnet/routing/plot.hpp"
#include "argnet/routing/router.hpp"
#include "argnet/train/model_io.hpp"
#include "argnet/util/error.hpp"

using namespace argnet;
using data::Label;
using train::Prediction;

namespace {

std::vector<Prediction> random_predictions(std::mt19937_64& rng, std::size_t n, const std::vector<Label>& gold) {
    std::vector<Prediction> out;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        Prediction p;
        p.id = "s" + std::to_string(i);
        // Some exact ties at 0.5 and at the grid points.
        p.y_hat = rng() % 10 == 0 ? 0.5 + 0.01 * static_cast<double>(rng() % 50) : u(rng);
        p.pred = train::decide(p.y_hat);
        p.gold = gold[i];
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("confidence measures") {
    CHECK(routing::confidence(0.2) == doctest::Approx(0.8));
    CHECK(routing::confidence(0.5) == 0.5);
    CHECK(routing::entropy_confidence(0.5) == doctest::Approx(0.5));
    CHECK(routing::entropy_confidence(1.0) == doctest::Approx(1.0));
    CHECK(routing::entropy_confidence(0.9) > routing::entropy_confidence(0.7));
    CHECK(routing::entropy_confidence(0.1) == doctest::Approx(routing::entropy_confidence(0.9)));
    const auto g = routing::default_threshold_grid();
    REQUIRE(g.size() == 51);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 1.0);
}

TEST_CASE("routing endpoints, monotone routed sets and the union metric") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        std::vector<Label> gold(n);
        for (auto& g : gold) g = rng() % 2 ? Label::Fake : Label::Real;
        const auto argd = random_predictions(rng, n, gold);
        const auto arg = random_predictions(rng, n, gold);
        const auto kind = trial % 2 ? routing::ConfidenceKind::Entropy : routing::ConfidenceKind::MaxProb;
        std::vector<double> grid{0.0, 0.5, 0.55, 0.7, 0.7, 0.9, 1.0, 1.0 + 1e-9};
        std::set<std::string> prev;
        for (double t : grid) {
            const auto r = routing::route_predictions(argd, [&](std::size_t i) { return arg[i]; }, t, kind);
            std::set<std::string> routed;
            std::vector<Label> combined;
            for (std::size_t i = 0; i < n; ++i) {
                const bool to_arg = r.decisions[i].routed_to == model::ModelKind::Arg;
                CHECK(to_arg == (routing::confidence(argd[i].y_hat, kind) < t));
                if (to_arg) routed.insert(argd[i].id);
                CHECK(r.predictions[i].pred == (to_arg ? arg[i].pred : argd[i].pred));
                combined.push_back(r.predictions[i].pred);
            }
            CHECK(std::includes(routed.begin(), routed.end(), prev.begin(), prev.end()));
            CHECK(r.fraction_routed == doctest::Approx(static_cast<double>(routed.size()) / static_cast<double>(n)));
            CHECK(r.metrics == data::compute_metrics(combined, gold));
            if (t <= 0.5) CHECK(routed.empty());
            if (t > 1.0) CHECK(routed.size() == n);
            prev = routed;
        }
        const auto curve = routing::sweep_thresholds(argd, arg, routing::default_threshold_grid(), kind);
        for (std::size_t k = 1; k < curve.points.size(); ++k)
            CHECK(curve.points[k].fraction_routed >= curve.points[k - 1].fraction_routed);
    }
}

TEST_CASE("routing curve CSV round trips exactly") {
    std::mt19937_64 rng(4);
    std::vector<Label> gold(30);
    for (auto& g : gold) g = rng() % 2 ? Label::Fake : Label::Real;
    const auto curve = routing::sweep_thresholds(random_predictions(rng, 30, gold), random_predictions(rng, 30, gold),
                                                 routing::default_threshold_grid());
    const auto csv = routing::to_csv(curve);
    CHECK(csv.rfind("threshold,fraction_routed,macro_f1,accuracy,f1_real,f1_fake\n", 0) == 0);
    const auto back = routing::curve_from_csv(csv);
    REQUIRE(back.points.size() == curve.points.size());
    for (std::size_t i = 0; i < back.points.size(); ++i) {
        CHECK(back.points[i].threshold == curve.points[i].threshold);
        CHECK(back.points[i].fraction_routed == curve.points[i].fraction_routed);
        CHECK(back.points[i].metrics.macro_f1 == curve.points[i].metrics.macro_f1);
        CHECK(back.points[i].metrics.f1_fake == curve.points[i].metrics.f1_fake);
    }
    const auto svg = routing::render_curve_svg(curve, "test");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK_THROWS_AS(routing::sweep_thresholds(random_predictions(rng, 30, gold), random_predictions(rng, 30, gold),
                                              {0.9, 0.6}),
                    ValidationError);
}

TEST_CASE("model routing checks rationales only for routed samples") {
    auto corpus = data::generate_synthetic_corpus(20, 1.0, 0.5, 6);
    model::ArgModel arg(checks::tiny_hparams(8), 1);
    auto argd = distill::ArgDModel::init_from_arg(arg, distill::ArgDConfig{1.0, 2, 1, false}, 2);
    const auto at_zero = routing::route(corpus, *argd, arg, 0.5);
    const auto at_full = routing::route(corpus, *argd, arg, 1.0 + 1e-9);
    CHECK(at_zero.metrics == train::evaluate(*argd, corpus));
    CHECK(at_full.metrics == train::evaluate(arg, corpus));

    // Drop rationales from samples ARG-D is most confident about.
    std::size_t best = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (at_zero.decisions[i].confidence > at_zero.decisions[best].confidence) best = i;
    const double t = at_zero.decisions[best].confidence;
    corpus[best].rationale_td.reset();
    CHECK_NOTHROW(routing::route(corpus, *argd, arg, t));
    try {
        (void)routing::route(corpus, *argd, arg, 1.0 + 1e-9);
        FAIL("missing rationale accepted");
    } catch (const MissingFieldError& e) {
        REQUIRE(e.ids().size() == 1);
        CHECK(e.ids()[0] == corpus[best].item.id);
    }
}

TEST_CASE("overlap partitions are disjoint and rebuild the additional-correct set") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        routing::IdVotes model, base, td, cs;
        std::map<std::string, Label> gold;
        const std::size_t n = 1 + rng() % 40;
        std::set<std::string> want;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "s" + std::to_string(i);
            gold[id] = rng() % 2 ? Label::Fake : Label::Real;
            auto vote = [&]() -> train::Vote {
                const auto r = rng() % 5;
                if (r == 4) return std::nullopt;
                return r % 2 ? Label::Fake : Label::Real;
            };
            model[id] = rng() % 2 ? gold[id] : (gold[id] == Label::Real ? Label::Fake : Label::Real);
            base[id] = rng() % 2 ? gold[id] : (gold[id] == Label::Real ? Label::Fake : Label::Real);
            td[id] = vote();
            cs[id] = vote();
            if (*model[id] == gold[id] && *base[id] != gold[id]) want.insert(id);
        }
        const auto r = routing::overlap_analysis(model, base, td, cs, gold);
        std::set<std::string> got;
        std::size_t total = 0;
        for (const auto* part : {&r.both, &r.td_only, &r.cs_only, &r.neither}) {
            total += part->size();
            got.insert(part->begin(), part->end());
        }
        CHECK(total == got.size());
        CHECK(got == want);
        for (const auto& id : r.both) CHECK((*td[id] == gold[id] && *cs[id] == gold[id]));
        for (const auto& id : r.neither) {
            CHECK_FALSE((td[id] && *td[id] == gold[id]));
            CHECK_FALSE((cs[id] && *cs[id] == gold[id]));
        }
    }
    routing::IdVotes a{{"x", Label::Real}}, b{{"y", Label::Real}};
    CHECK_THROWS_AS(routing::overlap_analysis(a, b, a, a, {{"x", Label::Real}}), ValidationError);
}
