#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>

#include "argnet/distill/argd_model.hpp"
#include "argnet/model/baselines.hpp"
#include "argnet/model/checkpoint.hpp"

namespace argnet::train {

/// Freshly initialised model of a rationale-consuming or baseline kind.
/// ARG-D needs a teacher and is built through ArgDModel::init_from_arg.
std::unique_ptr<model::DetectorModel> make_model(model::ModelKind kind, const model::HyperParams& hp,
                                                 std::uint64_t seed);

void save_model(const std::filesystem::path& path, const model::DetectorModel& m);
std::unique_ptr<model::DetectorModel> model_from_checkpoint(const model::CheckpointData& ck);
std::unique_ptr<model::DetectorModel> load_model(const std::filesystem::path& path);
/// Throws CheckpointError unless the checkpoint holds an ARG.
std::unique_ptr<model::ArgModel> load_arg(const std::filesystem::path& path);

}  // namespace argnet::train
