#include "argnet/train/run_record.hpp"

#include "argnet/util/json_io.hpp"

namespace argnet::train {

nlohmann::json to_json(const GridCell& c) {
    return {{"lr", c.lr}, {"beta1", c.beta1}, {"beta2", c.beta2}, {"lambda_kd", c.lambda_kd}};
}

GridCell grid_cell_from_json(const nlohmann::json& j) {
    return {j.at("lr").get<double>(), j.at("beta1").get<double>(), j.at("beta2").get<double>(),
            j.at("lambda_kd").get<double>()};
}

nlohmann::json to_json(const EpochRecord& e) {
    nlohmann::json j{{"epoch", e.epoch},
                     {"train_loss", e.train_loss},
                     {"train", data::to_json(e.train)},
                     {"val", data::to_json(e.val)},
                     {"seconds", e.seconds}};
    j["val_kd_loss"] = e.val_kd_loss ? nlohmann::json(*e.val_kd_loss) : nlohmann::json(nullptr);
    return j;
}

EpochRecord epoch_record_from_json(const nlohmann::json& j) {
    EpochRecord e;
    e.epoch = j.at("epoch").get<int>();
    e.train_loss = j.at("train_loss").get<double>();
    e.train = data::metrics_from_json(j.at("train"));
    e.val = data::metrics_from_json(j.at("val"));
    if (j.contains("val_kd_loss") && !j["val_kd_loss"].is_null()) e.val_kd_loss = j["val_kd_loss"].get<double>();
    e.seconds = j.value("seconds", 0.0);
    return e;
}

nlohmann::json to_json(const CellRecord& c) {
    auto epochs = nlohmann::json::array();
    for (const auto& e : c.epochs) epochs.push_back(to_json(e));
    return {{"cell", to_json(c.cell)},
            {"epochs", epochs},
            {"best_epoch", c.best_epoch},
            {"best_val_macro_f1", c.best_val_macro_f1},
            {"diverged", c.diverged},
            {"note", c.note}};
}

CellRecord cell_record_from_json(const nlohmann::json& j) {
    CellRecord c;
    c.cell = grid_cell_from_json(j.at("cell"));
    for (const auto& e : j.at("epochs")) c.epochs.push_back(epoch_record_from_json(e));
    c.best_epoch = j.at("best_epoch").get<int>();
    c.best_val_macro_f1 = j.at("best_val_macro_f1").get<double>();
    c.diverged = j.at("diverged").get<bool>();
    c.note = j.value("note", std::string());
    return c;
}

nlohmann::json to_json(const RunRecord& r) {
    auto cells = nlohmann::json::array();
    for (const auto& c : r.cells) cells.push_back(to_json(c));
    return {{"model_kind", r.model_kind},
            {"config", r.config},
            {"cells", cells},
            {"best_cell", r.best_cell},
            {"best_val_epoch", r.best_val_epoch},
            {"best_val", data::to_json(r.best_val)},
            {"test", data::to_json(r.test)},
            {"seconds", r.seconds}};
}

RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.model_kind = j.at("model_kind").get<std::string>();
    r.config = j.at("config");
    for (const auto& c : j.at("cells")) r.cells.push_back(cell_record_from_json(c));
    r.best_cell = j.at("best_cell").get<int>();
    r.best_val_epoch = j.at("best_val_epoch").get<int>();
    r.best_val = data::metrics_from_json(j.at("best_val"));
    r.test = data::metrics_from_json(j.at("test"));
    r.seconds = j.value("seconds", 0.0);
    return r;
}

void save_run_record(const std::filesystem::path& path, const RunRecord& r) { util::write_json(path, to_json(r)); }

RunRecord load_run_record(const std::filesystem::path& path) { return run_record_from_json(util::read_json(path)); }

int select_best_cell(const std::vector<CellRecord>& cells) {
    int best = -1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].diverged || cells[i].best_epoch < 0) continue;
        if (best < 0 || cells[i].best_val_macro_f1 > cells[static_cast<std::size_t>(best)].best_val_macro_f1) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace argnet::train
