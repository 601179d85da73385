#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "argnet/data/corpus.hpp"
#include "argnet/distill/argd_model.hpp"
#include "argnet/model/hyperparams.hpp"
#include "argnet/rationale/collector.hpp"
#include "argnet/rationale/http_endpoint.hpp"
#include "argnet/rationale/mock_endpoint.hpp"
#include "argnet/routing/router.hpp"
#include "argnet/train/trainer.hpp"

namespace argnet::cli {

struct SyntheticSettings {
    std::size_t n = 2000;
    double p_td = 1.0;
    double p_cs = 0.5;
    bool reliability_markers = false;
};

/// Everything a run can be configured with. Sections missing from the file
/// keep their defaults.
struct AppConfig {
    std::uint64_t seed = 42;
    data::SplitRatios split;
    model::HyperParams model;
    train::TrainConfig train;
    distill::ArgDConfig argd;
    rationale::CollectorConfig collect;
    std::vector<data::Perspective> perspectives{data::Perspective::TextualDescription,
                                                data::Perspective::Commonsense};
    rationale::ClientConfig client;
    rationale::HttpEndpointConfig endpoint;
    rationale::MockConfig mock;
    std::vector<double> threshold_grid = routing::default_threshold_grid();
    routing::ConfidenceKind confidence = routing::ConfidenceKind::MaxProb;
    SyntheticSettings synthetic;
};

/// Parses every section, then throws one ValidationError listing all problems.
AppConfig app_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AppConfig& c);
AppConfig load_app_config(const std::filesystem::path& path);

/// Entry point shared by the executable and tests. Returns the exit code;
/// failures print a JSON error object to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace argnet::cli
