#include "argnet/train/model_io.hpp"

#include "argnet/util/error.hpp"

namespace argnet::train {

using model::ModelKind;

std::unique_ptr<model::DetectorModel> make_model(ModelKind kind, const model::HyperParams& hp, std::uint64_t seed) {
    switch (kind) {
        case ModelKind::Arg: return std::make_unique<model::ArgModel>(hp, seed);
        case ModelKind::Baseline: return std::make_unique<model::BaselineModel>(hp, seed);
        case ModelKind::BaselinePlusRationale: return std::make_unique<model::BaselinePlusRationaleModel>(hp, seed);
        case ModelKind::ArgD: break;
    }
    throw ValidationError("argd models are initialised from an arg teacher");
}

void save_model(const std::filesystem::path& path, const model::DetectorModel& m) {
    model::write_checkpoint(path, std::string(model::to_string(m.kind())), m.checkpoint_meta(), m.parameters());
}

std::unique_ptr<model::DetectorModel> model_from_checkpoint(const model::CheckpointData& ck) {
    const ModelKind kind = model::parse_model_kind(ck.kind);
    const auto hp = model::hyperparams_from_json(ck.meta.at("hyperparams"));
    std::unique_ptr<model::DetectorModel> m;
    if (kind == ModelKind::ArgD) {
        m = std::make_unique<distill::ArgDModel>(hp, distill::argd_config_from_json(ck.meta.at("argd")), 0);
    } else {
        m = make_model(kind, hp, 0);
    }
    model::load_parameters(ck, m->parameters());
    return m;
}

std::unique_ptr<model::DetectorModel> load_model(const std::filesystem::path& path) {
    return model_from_checkpoint(model::read_checkpoint(path));
}

std::unique_ptr<model::ArgModel> load_arg(const std::filesystem::path& path) {
    auto ck = model::read_checkpoint(path);
    if (ck.kind != model::to_string(ModelKind::Arg)) {
        throw CheckpointError(path.string() + " holds a '" + ck.kind + "' model, expected arg");
    }
    auto m = std::make_unique<model::ArgModel>(model::hyperparams_from_json(ck.meta.at("hyperparams")), 0);
    model::load_parameters(ck, m->parameters());
    return m;
}

}  // namespace argnet::train
