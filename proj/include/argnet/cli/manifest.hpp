#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace argnet::cli {

/// Record of one command run: argv, config snapshot, digests of inputs and
/// the artifacts written. Written as <out>/manifest.json.
class Manifest {
public:
    Manifest(std::string command, std::vector<std::string> argv, nlohmann::json config);

    void add_input(const std::filesystem::path& path);
    void add_artifact(const std::filesystem::path& path);
    void set(const std::string& key, nlohmann::json value);
    nlohmann::json to_json() const;
    void write(const std::filesystem::path& out_dir) const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    nlohmann::json config_;
    nlohmann::json inputs_ = nlohmann::json::array();
    std::vector<std::string> artifacts_;
    nlohmann::json extra_ = nlohmann::json::object();
};

}  // namespace argnet::cli
