#include "argnet/cli/manifest.hpp"

#include "argnet/util/hash.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::cli {

Manifest::Manifest(std::string command, std::vector<std::string> argv, nlohmann::json config)
    : command_(std::move(command)), argv_(std::move(argv)), config_(std::move(config)) {}

void Manifest::add_input(const std::filesystem::path& path) {
    inputs_.push_back({{"path", path.string()}, {"sha256", util::sha256_file(path)}});
}

void Manifest::add_artifact(const std::filesystem::path& path) { artifacts_.push_back(path.string()); }

void Manifest::set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

nlohmann::json Manifest::to_json() const {
    nlohmann::json j{{"command", command_},
                     {"argv", argv_},
                     {"config", config_},
                     {"inputs", inputs_},
                     {"artifacts", artifacts_}};
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    return j;
}

void Manifest::write(const std::filesystem::path& out_dir) const {
    util::write_json(out_dir / "manifest.json", to_json());
}

}  // namespace argnet::cli
