// Acceptance runner: one PASS/FAIL line per criterion, exit code 1 if any fails.
// Models trained for criterion 3 are reused by 4 through 7.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <fmt/format.h>

#include "arg_checks.hpp"

#include "argnet/cli/commands.hpp"
#include "argnet/data/corpus.hpp"
#include "argnet/distill/teacher_cache.hpp"
#include "argnet/routing/router.hpp"
#include "argnet/train/model_io.hpp"
#include "argnet/train/trainer.hpp"
#include "argnet/train/voting.hpp"
#include "argnet/util/json_io.hpp"

using namespace argnet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kGradRtol = 1e-3;
constexpr double kFidelityTol = 1e-5;
constexpr double kNumericBudgetS = 60;
constexpr double kArgMinF1 = 0.90;
constexpr double kBaselineMaxF1 = 0.60;
constexpr double kPlantedBudgetS = 600;
constexpr double kWeightGap = 0.1;
constexpr double kMinAuc = 0.9;
constexpr double kDistillGap = 0.05;
constexpr double kSmokeBudgetS = 900;
constexpr std::uint64_t kCorpusSeed = 2024;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int n, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
}

fs::path work_dir() {
    auto d = fs::temp_directory_path() / "argnet_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

model::HyperParams planted_hparams() {
    model::HyperParams hp;
    hp.d = 32;
    hp.heads = 4;
    hp.vocab_size = 1024;
    hp.max_tokens = 40;
    hp.dropout = 0.1;
    hp.ffn_mult = 2;
    return hp;
}

train::TrainConfig planted_train_config() {
    train::TrainConfig c;
    c.lr_grid = {1e-3};
    c.beta1_grid = {1.0};
    c.beta2_grid = {1.0};
    c.lambda_grid = {1.0};
    c.max_epochs = 12;
    c.batch_size = 32;
    c.early_stop_patience = 3;
    c.seed = 7;
    return c;
}

void criterion_numeric_core() {
    const auto t = Clock::now();
    model::ArgModel m(checks::tiny_hparams(8), 31);
    m.parameters().find("fusion.raw")->value << 0.25, -0.5, 0.75;
    const auto samples = data::generate_synthetic_corpus(2, 0.7, 0.5, 5);
    const auto r = checks::arg_grad_check(m, samples, kGradRtol);
    const double secs = since(t);
    report(1, r.failures == 0 && r.checked == m.parameters().scalar_count() && secs < kNumericBudgetS,
           fmt::format("{} of {} scalars within rtol {} (worst rel {:.2e} at {}), {:.1f}s", r.checked - r.failures,
                       r.checked, kGradRtol, r.worst_rel, r.worst_name.empty() ? "-" : r.worst_name, secs));
}

void criterion_loss_fidelity() {
    const auto t = Clock::now();
    const auto corpus = data::generate_synthetic_corpus(30, 0.7, 0.5, 17);
    checks::Fidelity worst;
    std::size_t instances = 0, kd_instances = 0;
    nn::Rng rng(99);
    for (int seed = 0; seed < 4; ++seed) {
        auto hp = checks::tiny_hparams(8 + 4 * (seed % 2));
        hp.mlp_hidden = seed >= 2 ? std::vector<int>{7, 5} : std::vector<int>{};
        hp.shared_rationale_encoder = seed != 3;
        model::ArgModel m(hp, 1000 + seed);
        m.parameters().find("fusion.raw")->value = nn::normal_init(1, 3, 1.0, rng);
        const double b1 = 0.25 + seed, b2 = 2.0 - 0.4 * seed;
        m.set_loss_weights(b1, b2);
        auto samples = corpus;
        // One refusal per model so the skipped judgment term is covered.
        samples[static_cast<std::size_t>(seed)].rationale_cs->llm_judgment.reset();
        samples[static_cast<std::size_t>(seed)].rationale_cs->parse_status = data::ParseStatus::Refusal;
        samples[static_cast<std::size_t>(seed)].rationale_cs->usefulness.reset();
        for (const auto& s : samples) {
            worst.merge(checks::arg_fidelity(m, s, b1, b2));
            ++instances;
        }
        auto student = distill::ArgDModel::init_from_arg(m, distill::ArgDConfig{1.0, 2, 1, false}, 2000 + seed);
        const auto teacher = distill::compute_teacher_features(m, samples);
        for (const auto& s : samples) {
            worst.mse = std::max(worst.mse, checks::kd_fidelity(*student, s, teacher.at(s.item.id)));
            ++kd_instances;
        }
    }
    const double secs = since(t);
    const double all = std::max({worst.attention, worst.cross_entropy, worst.reweight, worst.fusion, worst.total,
                                 worst.mse});
    report(2, all <= kFidelityTol && instances >= 100 && kd_instances >= 100 && secs < kNumericBudgetS,
           fmt::format("{} ARG + {} kd instances; max |err| attention {:.1e}, cross-entropy {:.1e}, reweight {:.1e}, "
                       "fusion {:.1e}, total {:.1e}, mse {:.1e} (tol {}), {:.1f}s",
                       instances, kd_instances, worst.attention, worst.cross_entropy, worst.reweight, worst.fusion,
                       worst.total, worst.mse, kFidelityTol, secs));
}

struct Planted {
    data::DatasetSplit split;
    std::unique_ptr<model::DetectorModel> arg, baseline, argd;
    train::RunRecord arg_record, baseline_record, argd_record;
    fs::path arg_path;
};

void criterion_planted(Planted& p, const fs::path& dir) {
    const auto t = Clock::now();
    p.split = data::temporal_split(data::generate_synthetic_corpus(2000, 1.0, 0.5, kCorpusSeed), {});
    auto arg = train::train(model::ModelKind::Arg, planted_hparams(), p.split, planted_train_config());
    const double arg_secs = since(t);
    auto base = train::train(model::ModelKind::Baseline, planted_hparams(), p.split, planted_train_config());
    const double secs = since(t);
    p.arg = std::move(arg.model);
    p.arg_record = arg.record;
    p.baseline = std::move(base.model);
    p.baseline_record = base.record;
    p.arg_path = dir / "planted_arg.ckpt";
    train::save_model(p.arg_path, *p.arg);
    const double f_arg = p.arg_record.test.macro_f1, f_base = p.baseline_record.test.macro_f1;
    report(3, f_arg >= kArgMinF1 && f_base <= kBaselineMaxF1 && secs < kPlantedBudgetS,
           fmt::format("ARG test macro F1 {:.4f} (>= {}), BASELINE {:.4f} (<= {}), ARG {:.0f}s + BASELINE {:.0f}s",
                       f_arg, kArgMinF1, f_base, kBaselineMaxF1, arg_secs, secs - arg_secs));
}

void criterion_adaptive(const Planted& p) {
    const auto& arg = static_cast<const model::ArgModel&>(*p.arg);
    double wt = 0, wc = 0;
    for (const auto& s : p.split.test) {
        const auto out = arg.forward(data::SampleView(s)).first;
        wt += out.w_t;
        wc += out.w_c;
    }
    wt /= static_cast<double>(p.split.test.size());
    wc /= static_cast<double>(p.split.test.size());

    const auto t = Clock::now();
    data::SyntheticOptions opts;
    opts.reliability_markers = true;
    const auto split = data::temporal_split(data::generate_synthetic_corpus(2000, 0.7, 0.5, kCorpusSeed + 1, opts), {});
    auto run = train::train(model::ModelKind::Arg, planted_hparams(), split, planted_train_config());
    const auto& m = static_cast<const model::ArgModel&>(*run.model);
    std::vector<double> score;
    std::vector<int> useful;
    for (const auto& s : split.test) {
        score.push_back(m.forward(data::SampleView(s)).first.u_hat_t);
        useful.push_back(*s.rationale_td->usefulness);
    }
    const double auc = oracle::auc(score, useful);
    report(4, wt - wc >= kWeightGap && auc >= kMinAuc,
           fmt::format("mean w_t {:.4f} - mean w_c {:.4f} = {:.4f} (>= {}); u_hat_t AUC {:.4f} (>= {}) on p_td=0.7, "
                       "{} test samples, {:.0f}s",
                       wt, wc, wt - wc, kWeightGap, auc, kMinAuc, split.test.size(), since(t)));
}

void criterion_distill(Planted& p, const fs::path& dir) {
    const auto t = Clock::now();
    train::DistillOptions opts{distill::ArgDConfig{1.0, 4, 1, false}, dir / "teacher_features.bin"};
    auto res = train::distill(p.arg_path, p.split, planted_train_config(), opts);
    p.argd = std::move(res.result.model);
    p.argd_record = res.result.record;

    auto test = p.split.test;
    // Strip rationales so any read would throw, and audit field access.
    for (auto& s : test) {
        s.rationale_td.reset();
        s.rationale_cs.reset();
    }
    data::AccessAudit audit;
    const auto metrics = train::evaluate(*p.argd, test, &audit);

    const auto& epochs = p.argd_record.cells[static_cast<std::size_t>(p.argd_record.best_cell)].epochs;
    bool monotone = epochs.size() >= 3;
    std::string kd;
    for (std::size_t e = 0; e < epochs.size() && e < 3; ++e) {
        kd += fmt::format("{}{:.5f}", e ? " > " : "", *epochs[e].val_kd_loss);
        if (e > 0) monotone = monotone && *epochs[e].val_kd_loss < *epochs[e - 1].val_kd_loss;
    }
    const double gap = p.arg_record.test.macro_f1 - metrics.macro_f1;
    report(5, gap <= kDistillGap && audit.rationale_reads == 0 && monotone,
           fmt::format("ARG-D test macro F1 {:.4f} vs ARG {:.4f} (gap {:.4f}, allowed {}); rationale reads {}; "
                       "val kd loss {} ({}), {:.0f}s",
                       metrics.macro_f1, p.arg_record.test.macro_f1, gap, kDistillGap, audit.rationale_reads.load(),
                       kd, monotone ? "decreasing" : "not decreasing", since(t)));
}

void criterion_routing(const Planted& p) {
    const auto grid = routing::default_threshold_grid();
    const auto& test = p.split.test;
    const auto curve = routing::sweep_thresholds(test, *p.argd, *p.arg, grid);
    const bool low = curve.points.front().metrics == train::evaluate(*p.argd, test);
    const bool high = curve.points.back().metrics == train::evaluate(*p.arg, test);
    bool monotone = true;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        monotone = monotone && curve.points[i].fraction_routed >= curve.points[i - 1].fraction_routed;

    // Deliberately under-trained student: copied layers, untrained simulator.
    const auto weak = distill::ArgDModel::init_from_arg(static_cast<const model::ArgModel&>(*p.arg),
                                                        distill::ArgDConfig{1.0, 4, 1, false}, 77);
    const auto weak_curve = routing::sweep_thresholds(test, *weak, *p.arg, grid);
    const double f_zero = weak_curve.points.front().metrics.macro_f1;
    const double f_full = weak_curve.points.back().metrics.macro_f1;
    report(6, low && high && monotone && f_full >= f_zero && curve.points.front().fraction_routed == 0.0 &&
                  curve.points.back().fraction_routed == 1.0,
           fmt::format("endpoints equal ARG-D-only: {}, ARG-only: {}; fraction_routed monotone: {}; under-trained "
                       "ARG-D: macro F1 {:.4f} at full routing vs {:.4f} at zero",
                       low ? "yes" : "no", high ? "yes" : "no", monotone ? "yes" : "no", f_full, f_zero));
}

void criterion_ensembles(const Planted& p) {
    bool ok = true;
    std::string detail;
    for (auto part : {data::SplitPart::Val, data::SplitPart::Test}) {
        const auto& samples = data::part_of(p.split, part);
        std::vector<std::vector<train::Vote>> voters(3);
        std::vector<data::Label> gold;
        const auto base = train::predict_all(*p.baseline, samples);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            voters[0].push_back(samples[i].rationale_td->llm_judgment);
            voters[1].push_back(samples[i].rationale_cs->llm_judgment);
            voters[2].push_back(base[i].pred);
            gold.push_back(*samples[i].item.label);
        }
        const auto r = train::evaluate_ensembles(voters, gold, train::TieRule::Real);
        const bool oracle_ge = r.oracle_accuracy >= r.majority_accuracy;
        bool majority_ge = true;
        for (double a : r.voter_accuracy) majority_ge = majority_ge && r.majority_accuracy >= a;
        ok = ok && oracle_ge && majority_ge;
        detail += fmt::format("{}{}: oracle {:.4f} >= majority {:.4f}: {}; majority >= voters (llm_td {:.4f}, llm_cs "
                              "{:.4f}, baseline {:.4f}): {}",
                              detail.empty() ? "" : "; ", data::to_string(part), r.oracle_accuracy,
                              r.majority_accuracy, oracle_ge ? "yes" : "no", r.voter_accuracy[0],
                              r.voter_accuracy[1], r.voter_accuracy[2], majority_ge ? "yes" : "no");
    }
    report(7, ok, detail);
}

void criterion_pipeline(const fs::path& dir) {
    const auto t = Clock::now();
    const fs::path root = dir / "pipeline";
    nlohmann::json cfg{{"seed", 11},
                       {"model", {{"d", 32}, {"heads", 4}, {"vocab_size", 1024}, {"max_tokens", 48}, {"ffn_mult", 2}}},
                       {"train", {{"lr_grid", {1e-3}}, {"beta1_grid", {1.0}}, {"beta2_grid", {1.0}},
                                  {"lambda_grid", {1.0}}, {"max_epochs", 6}, {"batch_size", 32}}},
                       {"client", {{"requests_per_minute", 1e6}}},
                       {"synthetic", {{"n", 500}}}};
    fs::create_directories(root);
    util::write_json(root / "config.json", cfg);
    const std::string c = (root / "config.json").string();
    auto step = [&](const std::string& out, std::vector<std::string> rest) {
        std::vector<std::string> args{"--config", c, "--out", (root / out).string()};
        args.insert(args.end(), rest.begin(), rest.end());
        std::ostringstream o, e;
        const int code = cli::run_cli(args, o, e);
        if (code != 0) std::fprintf(stderr, "%s failed: %s\n", out.c_str(), e.str().c_str());
        return code == 0;
    };
    const std::string arg_ckpt = (root / "train" / "model.ckpt").string();
    const std::string data = (root / "collect" / "enriched.jsonl").string();
    bool ok = step("synth", {"synth"}) &&
              step("collect", {"collect", "--corpus", (root / "synth" / "corpus.jsonl").string()}) &&
              step("train", {"train", "--data", data, "--model", "arg"}) &&
              step("distill", {"distill", "--data", data, "--teacher", arg_ckpt}) &&
              step("route", {"route", "--data", data, "--argd", (root / "distill" / "model.ckpt").string(), "--arg",
                             arg_ckpt});
    std::size_t manifests = 0;
    for (const char* s : {"synth", "collect", "train", "distill", "route"}) manifests += fs::exists(root / s / "manifest.json");
    const double secs = since(t);
    ok = ok && manifests == 5 && fs::exists(root / "route" / "routing_curve.csv") && secs < kSmokeBudgetS;
    report(8, ok, fmt::format("synth -> collect(mock) -> train -> distill -> route on n=500: {}, {} of 5 manifests, "
                              "{:.0f}s (budget {:.0f}s)",
                              ok ? "completed" : "incomplete", manifests, secs, kSmokeBudgetS));
}

}  // namespace

int main() {
    const auto dir = work_dir();
    const auto t = Clock::now();
    try {
        criterion_numeric_core();
        criterion_loss_fidelity();
        Planted p;
        criterion_planted(p, dir);
        criterion_adaptive(p);
        criterion_distill(p, dir);
        criterion_routing(p);
        criterion_ensembles(p);
        criterion_pipeline(dir);
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d criterion check(s) failed, %.0fs total\n", failures, since(t));
    return failures ? 1 : 0;
}
