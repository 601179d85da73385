#include <filesystem>

#include "doctest.h"
#include "arg_checks.hpp"

#include "argnet/data/corpus.hpp"
#include "argnet/distill/teacher_cache.hpp"
#include "argnet/train/model_io.hpp"
#include "argnet/train/trainer.hpp"
#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"

using namespace argnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "argnet_unit";
    fs::create_directories(dir);
    return dir / name;
}

distill::ArgDConfig small_argd() {
    distill::ArgDConfig c;
    c.simulator_heads = 2;
    return c;
}

}  // namespace

TEST_CASE("kd loss is the mean squared difference over dimensions") {
    nn::Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 16);
        const Eigen::RowVectorXd a = nn::normal_init(1, d, 1.0, rng), b = nn::normal_init(1, d, 1.0, rng);
        CHECK(distill::kd_loss(a, b) == doctest::Approx(oracle::mse(checks::to_vec(a), checks::to_vec(b))).epsilon(1e-12));
        nn::Graph g;
        CHECK(distill::kd_loss(g.constant(a), g.constant(b)).scalar() == doctest::Approx(distill::kd_loss(a, b)));
    }
    CHECK_THROWS_AS(distill::kd_loss(Eigen::RowVectorXd::Zero(3), Eigen::RowVectorXd::Zero(4)), ValidationError);
}

TEST_CASE("ARG-D copies the news encoder and classifier bit-for-bit") {
    model::ArgModel arg(checks::tiny_hparams(8), 3);
    const auto d = distill::ArgDModel::init_from_arg(arg, small_argd(), 4);
    std::size_t copied = 0;
    for (std::size_t i = 0; i < d->parameters().size(); ++i) {
        const auto& p = d->parameters()[i];
        const bool shared = p.name.rfind("news_encoder.", 0) == 0 || p.name.rfind("classifier.", 0) == 0;
        const auto* src = arg.parameters().find(p.name);
        if (shared) {
            REQUIRE(src);
            CHECK(src->value == p.value);
            ++copied;
        } else {
            CHECK(p.name.rfind("simulator", 0) == 0);
        }
    }
    CHECK(copied > 0);

    const auto path = scratch("teacher_copy.ckpt");
    train::save_model(path, arg);
    const auto d2 = distill::ArgDModel::init_from_arg(model::read_checkpoint(path), small_argd(), 4);
    for (std::size_t i = 0; i < d->parameters().size(); ++i) CHECK(d2->parameters()[i].value == d->parameters()[i].value);

    model::BaselineModel base(checks::tiny_hparams(8), 1);
    train::save_model(scratch("not_arg.ckpt"), base);
    CHECK_THROWS_AS(distill::ArgDModel::init_from_arg(model::read_checkpoint(scratch("not_arg.ckpt")), small_argd(), 4),
                    CheckpointError);
}

TEST_CASE("ARG-D kd loss matches the oracle and its gradients the finite differences") {
    const auto corpus = data::generate_synthetic_corpus(6, 1.0, 0.5, 7);
    for (int d : {4, 8}) {
        auto hp = checks::tiny_hparams(d);
        hp.max_tokens = 16;
        model::ArgModel arg(hp, 11);
        auto student = distill::ArgDModel::init_from_arg(arg, small_argd(), 12);
        const auto teacher = distill::compute_teacher_features(arg, corpus);
        for (const auto& s : corpus) CHECK(checks::kd_fidelity(*student, s, teacher.at(s.item.id)) < 1e-12);

        student->set_teacher_features(&teacher);
        student->set_lambda_kd(1.5);
        const std::vector<data::EnrichedSample> two(corpus.begin(), corpus.begin() + 2);
        nn::Gradients grads(student->parameters());
        auto loss = [&] {
            double s = 0;
            for (const auto& c : two) {
                nn::Graph g;
                s += student->training_step(g, data::SampleView(c), nn::eval_mode()).loss.scalar();
            }
            return s;
        };
        for (const auto& c : two) {
            nn::Graph g;
            g.backward(student->training_step(g, data::SampleView(c), nn::eval_mode()).loss, grads);
        }
        const auto r = oracle::grad_check(student->parameters(), loss, grads, 1e-4, 1e-8);
        CHECK_MESSAGE(r.failures == 0, "d=" << d << " " << r.worst_name << " rel " << r.worst_rel);

        // The loss is L_ce + lambda * kd.
        const auto& c = two[0];
        const auto out = student->forward_argd(c.item);
        nn::Graph g;
        const double l = student->training_step(g, data::SampleView(c), nn::eval_mode()).loss.scalar();
        CHECK(l == doctest::Approx(oracle::bce(out.y_hat, data::to_int(*c.item.label)) +
                                   1.5 * oracle::mse(checks::to_vec(out.f_cls_d), checks::to_vec(teacher.at(c.item.id))))
                       .epsilon(1e-10));
    }
}

TEST_CASE("ARG-D needs teacher features to train and none to predict") {
    auto corpus = data::generate_synthetic_corpus(3, 1.0, 0.5, 7);
    model::ArgModel arg(checks::tiny_hparams(8), 1);
    auto student = distill::ArgDModel::init_from_arg(arg, small_argd(), 2);
    nn::Graph g;
    CHECK_THROWS_AS(student->training_step(g, data::SampleView(corpus[0]), nn::eval_mode()), ValidationError);
    distill::TeacherFeatures partial;
    student->set_teacher_features(&partial);
    CHECK_THROWS_AS(student->training_step(g, data::SampleView(corpus[0]), nn::eval_mode()), MissingFieldError);

    data::AccessAudit audit;
    for (auto& s : corpus) {
        s.rationale_td.reset();
        s.rationale_cs.reset();
        (void)student->predict(data::SampleView(s, &audit));
    }
    CHECK(audit.rationale_reads == 0);
}

TEST_CASE("teacher features are cached by teacher digest") {
    const auto corpus = data::generate_synthetic_corpus(8, 1.0, 0.5, 7);
    model::ArgModel arg(checks::tiny_hparams(8), 1);
    const auto path = scratch("features.bin");
    fs::remove(path);
    std::size_t forwards = 0;
    const auto a = distill::cached_teacher_features(path, std::string(64, 'a'), arg, corpus, &forwards);
    CHECK(forwards == corpus.size());
    const auto b = distill::cached_teacher_features(path, std::string(64, 'a'), arg, corpus, &forwards);
    CHECK(forwards == corpus.size());
    for (const auto& s : corpus) CHECK(a.at(s.item.id) == b.at(s.item.id));
    (void)distill::cached_teacher_features(path, std::string(64, 'b'), arg, corpus, &forwards);
    CHECK(forwards == 2 * corpus.size());
    CHECK_FALSE(distill::load_teacher_features(path, std::string(64, 'a')).has_value());

    auto missing = corpus;
    missing[3].rationale_cs.reset();
    try {
        (void)distill::compute_teacher_features(arg, missing);
        FAIL("missing rationale accepted");
    } catch (const MissingFieldError& e) {
        REQUIRE(e.ids().size() == 1);
        CHECK(e.ids()[0] == missing[3].item.id);
    }
}

TEST_CASE("distillation never modifies the teacher and records validation kd loss") {
    const auto corpus = data::generate_synthetic_corpus(60, 1.0, 0.5, 8);
    const auto split = data::temporal_split(corpus, {});
    model::ArgModel arg(checks::tiny_hparams(8), 1);
    const auto teacher_path = scratch("teacher.ckpt");
    train::save_model(teacher_path, arg);
    const auto digest = util::sha256_file(teacher_path);

    train::TrainConfig cfg;
    cfg.lr_grid = {1e-3};
    cfg.lambda_grid = {1.0};
    cfg.max_epochs = 2;
    cfg.batch_size = 16;
    train::DistillOptions opts{small_argd(), scratch("distill_features.bin")};
    fs::remove(opts.feature_cache);
    const auto res = train::distill(teacher_path, split, cfg, opts);
    CHECK(util::sha256_file(teacher_path) == digest);
    CHECK(res.teacher_forwards == split.train.size() + split.val.size());
    REQUIRE(res.result.record.cells.size() == 1);
    for (const auto& e : res.result.record.cells[0].epochs) CHECK(e.val_kd_loss.has_value());
    CHECK(res.result.model->kind() == model::ModelKind::ArgD);

    // A second run reuses the cache.
    const auto again = train::distill(teacher_path, split, cfg, opts);
    CHECK(again.teacher_forwards == 0);
    CHECK(again.result.record.test == res.result.record.test);
}
