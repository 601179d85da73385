#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "argnet/data/metrics.hpp"
#include "json.hpp"

namespace argnet::train {

/// One point of the hyperparameter grid. Fields a model kind does not use are
/// left at their defaults.
struct GridCell {
    double lr = 1e-3;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double lambda_kd = 1.0;

    bool operator==(const GridCell&) const = default;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0;
    data::MetricsReport train;  // from training-mode predictions made during the epoch
    data::MetricsReport val;
    std::optional<double> val_kd_loss;
    double seconds = 0;
};

struct CellRecord {
    GridCell cell;
    std::vector<EpochRecord> epochs;
    int best_epoch = -1;
    double best_val_macro_f1 = -1;
    bool diverged = false;
    std::string note;
};

struct RunRecord {
    std::string model_kind;
    nlohmann::json config;
    std::vector<CellRecord> cells;
    int best_cell = -1;
    int best_val_epoch = -1;
    data::MetricsReport best_val;
    /// Computed once, on the selected checkpoint.
    data::MetricsReport test;
    double seconds = 0;
};

nlohmann::json to_json(const GridCell& c);
GridCell grid_cell_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EpochRecord& e);
EpochRecord epoch_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CellRecord& c);
CellRecord cell_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

void save_run_record(const std::filesystem::path& path, const RunRecord& r);
RunRecord load_run_record(const std::filesystem::path& path);

/// Index of the cell with the highest best_val_macro_f1 (first on ties), or -1
/// when every cell diverged.
int select_best_cell(const std::vector<CellRecord>& cells);

}  // namespace argnet::train
