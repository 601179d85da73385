#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "argnet/nn/graph.hpp"
#include "json.hpp"

namespace argnet::model {

inline constexpr int kCheckpointMajor = 1;
inline constexpr int kCheckpointMinor = 0;

/// Decoded checkpoint container: model-kind tag, metadata and named tensors.
struct CheckpointData {
    int major = kCheckpointMajor;
    int minor = kCheckpointMinor;
    std::string kind;
    nlohmann::json meta;
    std::vector<std::pair<std::string, nn::Matrix>> tensors;

    const nn::Matrix* find(std::string_view name) const noexcept;
};

/// Binary layout: magic "ARGNETCK", u32 major, u32 minor, u64 + JSON header
/// ({"kind", "meta"}), u64 tensor count, then per tensor u32 + name,
/// u64 rows, u64 cols and column-major little-endian doubles.
void write_checkpoint(const std::filesystem::path& path, const std::string& kind, const nlohmann::json& meta,
                      const nn::ParameterSet& params);
/// Throws CheckpointError naming the version when the major version differs.
CheckpointData read_checkpoint(const std::filesystem::path& path);

/// Copies every tensor of `params` from the checkpoint (by name, shape-checked).
void load_parameters(const CheckpointData& ck, nn::ParameterSet& params);
/// Copies only parameters whose name starts with one of `prefixes`.
void load_parameters(const CheckpointData& ck, nn::ParameterSet& params, const std::vector<std::string>& prefixes);

}  // namespace argnet::model
