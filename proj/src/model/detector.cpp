#include "argnet/model/detector.hpp"

#include "argnet/util/error.hpp"

namespace argnet::model {

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Arg: return "arg";
        case ModelKind::ArgD: return "argd";
        case ModelKind::Baseline: return "baseline";
        case ModelKind::BaselinePlusRationale: return "baseline_plus_rationale";
    }
    return "arg";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "arg") return ModelKind::Arg;
    if (s == "argd" || s == "arg-d") return ModelKind::ArgD;
    if (s == "baseline") return ModelKind::Baseline;
    if (s == "baseline_plus_rationale" || s == "baseline+rationale") return ModelKind::BaselinePlusRationale;
    throw ValidationError("unknown model kind '" + std::string(s) + "'");
}

std::vector<bool> DetectorModel::trainable_mask() const { return std::vector<bool>(parameters().size(), true); }

std::vector<bool> freeze_prefixes(const nn::ParameterSet& params, const std::vector<std::string>& prefixes) {
    std::vector<bool> mask(params.size(), true);
    for (std::size_t i = 0; i < params.size(); ++i) {
        for (const auto& pre : prefixes) {
            if (params[i].name.rfind(pre, 0) == 0) mask[i] = false;
        }
    }
    return mask;
}

}  // namespace argnet::model
