#include "argnet/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "argnet/distill/teacher_cache.hpp"
#include "argnet/train/model_io.hpp"
#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::train {

using model::ModelKind;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nlohmann::json to_json(const nn::AdamConfig& a) {
    return {{"beta1", a.beta1}, {"beta2", a.beta2}, {"eps", a.eps}, {"clip_norm", a.clip_norm}};
}

std::vector<double> grid_or(const nlohmann::json& j, const char* key, std::vector<double> fallback) {
    return j.contains(key) ? j[key].get<std::vector<double>>() : fallback;
}

void require_nonempty(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw ValidationError(std::string(name) + " must be nonempty");
    for (double v : g) {
        if (!std::isfinite(v) || v < 0) throw ValidationError(std::string(name) + " values must be finite and >= 0");
    }
}

}  // namespace

void TrainConfig::validate() const {
    require_nonempty(lr_grid, "lr_grid");
    for (double lr : lr_grid) {
        if (lr <= 0) throw ValidationError("learning rates must be > 0");
    }
    require_nonempty(beta1_grid, "beta1_grid");
    require_nonempty(beta2_grid, "beta2_grid");
    require_nonempty(lambda_grid, "lambda_grid");
    if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
    if (early_stop_patience < 1) throw ValidationError("early_stop_patience must be >= 1");
}

std::vector<GridCell> TrainConfig::grid(ModelKind kind) const {
    std::vector<GridCell> cells;
    for (double lr : lr_grid) {
        if (kind == ModelKind::Arg) {
            for (double b1 : beta1_grid) {
                for (double b2 : beta2_grid) cells.push_back({lr, b1, b2, 1.0});
            }
        } else if (kind == ModelKind::ArgD) {
            for (double l : lambda_grid) cells.push_back({lr, 1.0, 1.0, l});
        } else {
            cells.push_back({lr, 1.0, 1.0, 1.0});
        }
    }
    return cells;
}

nlohmann::json to_json(const TrainConfig& c) {
    return {{"lr_grid", c.lr_grid},
            {"beta1_grid", c.beta1_grid},
            {"beta2_grid", c.beta2_grid},
            {"lambda_grid", c.lambda_grid},
            {"max_epochs", c.max_epochs},
            {"batch_size", c.batch_size},
            {"early_stop_patience", c.early_stop_patience},
            {"seed", c.seed},
            {"adam", to_json(c.adam)}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.lr_grid = grid_or(j, "lr_grid", c.lr_grid);
    c.beta1_grid = grid_or(j, "beta1_grid", c.beta1_grid);
    c.beta2_grid = grid_or(j, "beta2_grid", c.beta2_grid);
    c.lambda_grid = grid_or(j, "lambda_grid", c.lambda_grid);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
    c.seed = j.value("seed", c.seed);
    if (j.contains("adam")) {
        const auto& a = j["adam"];
        c.adam.beta1 = a.value("beta1", c.adam.beta1);
        c.adam.beta2 = a.value("beta2", c.adam.beta2);
        c.adam.eps = a.value("eps", c.adam.eps);
        c.adam.clip_norm = a.value("clip_norm", c.adam.clip_norm);
    }
    c.validate();
    return c;
}

std::vector<Prediction> predict_all(const model::DetectorModel& m, std::span<const data::EnrichedSample> samples,
                                    data::AccessAudit* audit) {
    std::vector<Prediction> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        const double y = m.predict(data::SampleView(s, audit));
        out.push_back({s.item.id, y, decide(y), s.item.label});
    }
    return out;
}

data::MetricsReport metrics_of(std::span<const Prediction> preds) {
    std::vector<data::Label> p, g;
    p.reserve(preds.size());
    g.reserve(preds.size());
    std::vector<std::string> unlabelled;
    for (const auto& x : preds) {
        if (!x.gold) {
            unlabelled.push_back(x.id);
            continue;
        }
        p.push_back(x.pred);
        g.push_back(*x.gold);
    }
    if (!unlabelled.empty()) throw MissingFieldError("samples without gold labels", unlabelled);
    return data::compute_metrics(p, g);
}

data::MetricsReport evaluate(const model::DetectorModel& m, std::span<const data::EnrichedSample> samples,
                             data::AccessAudit* audit) {
    const auto preds = predict_all(m, samples, audit);
    return metrics_of(preds);
}

nlohmann::json to_json(const Prediction& p) {
    nlohmann::json j{{"id", p.id}, {"y_hat", p.y_hat}, {"pred", data::to_string(p.pred)}};
    j["gold"] = p.gold ? nlohmann::json(data::to_string(*p.gold)) : nlohmann::json(nullptr);
    return j;
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds) {
    std::vector<nlohmann::json> rows;
    rows.reserve(preds.size());
    for (const auto& p : preds) rows.push_back(to_json(p));
    util::write_jsonl(path, rows);
}

void require_rationales(const data::DatasetSplit& split) {
    std::vector<std::string> missing;
    for (auto part : {&split.train, &split.val, &split.test}) {
        for (const auto& s : *part) {
            if (!s.has_both_rationales()) missing.push_back(s.item.id);
        }
    }
    if (!missing.empty()) throw MissingFieldError("model needs both rationales", missing);
}

TrainResult train(ModelKind kind, const ModelFactory& factory, const data::DatasetSplit& split,
                  const TrainConfig& cfg, const EpochHook& hook) {
    cfg.validate();
    if (split.train.empty() || split.val.empty() || split.test.empty()) {
        throw ValidationError("train, val and test splits must all be nonempty");
    }
    const auto t_run = std::chrono::steady_clock::now();
    TrainResult result;
    RunRecord& rec = result.record;
    rec.model_kind = std::string(model::to_string(kind));
    rec.config = {{"train", to_json(cfg)}};

    std::vector<nn::Matrix> best_snapshot;
    for (const GridCell& cell : cfg.grid(kind)) {
        CellRecord cr;
        cr.cell = cell;
        auto m = factory(cell);
        if (m->needs_rationales()) require_rationales(split);
        if (rec.config.find("model") == rec.config.end()) rec.config["model"] = m->checkpoint_meta();

        nn::Rng rng(cfg.seed);
        nn::AdamConfig acfg = cfg.adam;
        acfg.lr = cell.lr;
        nn::Adam adam(m->parameters(), acfg, m->trainable_mask());
        nn::Gradients grads(m->parameters());
        std::vector<nn::Matrix> cell_best;
        std::vector<std::size_t> order(split.train.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        int since_best = 0;

        for (int epoch = 1; epoch <= cfg.max_epochs && !cr.diverged; ++epoch) {
            const auto t_epoch = std::chrono::steady_clock::now();
            std::shuffle(order.begin(), order.end(), rng);
            double loss_sum = 0;
            std::vector<data::Label> preds, golds;
            for (std::size_t start = 0; start < order.size() && !cr.diverged;
                 start += static_cast<std::size_t>(cfg.batch_size)) {
                const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
                grads.zero();
                for (std::size_t b = start; b < end; ++b) {
                    const auto& sample = split.train[order[b]];
                    nn::Graph g;
                    auto step = m->training_step(g, data::SampleView(sample), nn::Mode{&rng});
                    const double loss = step.loss.scalar();
                    if (!std::isfinite(loss)) {
                        cr.diverged = true;
                        cr.note = "non-finite loss in epoch " + std::to_string(epoch);
                        break;
                    }
                    g.backward(step.loss, grads);
                    loss_sum += loss;
                    preds.push_back(decide(step.y_hat));
                    golds.push_back(*sample.item.label);
                }
                if (cr.diverged) break;
                grads.scale(1.0 / static_cast<double>(end - start));
                adam.step(m->parameters(), grads);
            }
            if (cr.diverged) break;

            EpochRecord er;
            er.epoch = epoch;
            er.train_loss = loss_sum / static_cast<double>(order.size());
            er.train = data::compute_metrics(preds, golds);
            er.val = evaluate(*m, split.val);
            if (hook) hook(*m, er);
            er.seconds = seconds_since(t_epoch);
            cr.epochs.push_back(er);

            if (er.val.macro_f1 > cr.best_val_macro_f1) {
                cr.best_val_macro_f1 = er.val.macro_f1;
                cr.best_epoch = epoch;
                cell_best = m->parameters().snapshot();
                since_best = 0;
            } else if (++since_best >= cfg.early_stop_patience) {
                break;
            }
        }

        rec.cells.push_back(cr);
        const int best = select_best_cell(rec.cells);
        if (best == static_cast<int>(rec.cells.size()) - 1) {
            result.model = std::move(m);
            best_snapshot = std::move(cell_best);
        }
    }

    rec.best_cell = select_best_cell(rec.cells);
    if (rec.best_cell < 0) throw Error("every grid cell diverged");
    const CellRecord& best = rec.cells[static_cast<std::size_t>(rec.best_cell)];
    rec.best_val_epoch = best.best_epoch;
    rec.best_val = best.epochs[static_cast<std::size_t>(best.best_epoch - 1)].val;
    result.model->parameters().restore(best_snapshot);
    rec.test = evaluate(*result.model, split.test);
    rec.seconds = seconds_since(t_run);
    return result;
}

TrainResult train(ModelKind kind, const model::HyperParams& hp, const data::DatasetSplit& split,
                  const TrainConfig& cfg) {
    if (kind == ModelKind::ArgD) throw ValidationError("use distill() for argd");
    ModelFactory factory = [&](const GridCell& cell) {
        auto m = make_model(kind, hp, cfg.seed);
        if (auto* arg = dynamic_cast<model::ArgModel*>(m.get())) arg->set_loss_weights(cell.beta1, cell.beta2);
        return m;
    };
    return train(kind, factory, split, cfg);
}

DistillResult distill(const std::filesystem::path& teacher_checkpoint, const data::DatasetSplit& split,
                      const TrainConfig& cfg, const DistillOptions& opts) {
    const auto ck = model::read_checkpoint(teacher_checkpoint);
    if (ck.kind != model::to_string(ModelKind::Arg)) {
        throw CheckpointError(teacher_checkpoint.string() + " holds a '" + ck.kind + "' model, expected arg");
    }
    auto teacher = load_arg(teacher_checkpoint);
    const std::string digest = util::sha256_file(teacher_checkpoint);

    std::vector<data::EnrichedSample> needed(split.train);
    needed.insert(needed.end(), split.val.begin(), split.val.end());
    DistillResult out;
    const distill::TeacherFeatures features =
        opts.feature_cache.empty()
            ? distill::compute_teacher_features(*teacher, needed, &out.teacher_forwards)
            : distill::cached_teacher_features(opts.feature_cache, digest, *teacher, needed, &out.teacher_forwards);

    ModelFactory factory = [&](const GridCell& cell) -> std::unique_ptr<model::DetectorModel> {
        distill::ArgDConfig c = opts.argd;
        c.lambda_kd = cell.lambda_kd;
        auto m = distill::ArgDModel::init_from_arg(ck, c, cfg.seed);
        m->set_teacher_features(&features);
        return m;
    };
    EpochHook hook = [&](const model::DetectorModel& m, EpochRecord& er) {
        er.val_kd_loss = static_cast<const distill::ArgDModel&>(m).mean_kd_loss(split.val);
    };
    out.result = train(ModelKind::ArgD, factory, split, cfg, hook);
    static_cast<distill::ArgDModel&>(*out.result.model).set_teacher_features(nullptr);
    out.result.record.config["teacher"] = {{"checkpoint", teacher_checkpoint.string()}, {"sha256", digest}};
    out.result.record.config["argd"] = distill::to_json(opts.argd);
    return out;
}

}  // namespace argnet::train
