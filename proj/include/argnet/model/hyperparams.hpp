#pragma once

#include <vector>

#include "argnet/nn/encoder.hpp"
#include "json.hpp"

namespace argnet::model {

struct HyperParams {
    int d = 64;
    int heads = 4;
    int max_tokens = 170;
    double beta1 = 1.0;  // weight of the usefulness-evaluation losses
    double beta2 = 1.0;  // weight of the judgment-prediction losses
    /// Hidden widths of every MLP head; empty means one hidden layer of width d.
    std::vector<int> mlp_hidden;
    double dropout = 0.2;

    int vocab_size = 8192;
    int encoder_layers = 1;
    int ffn_mult = 4;
    int pad_multiple = 8;
    /// One rationale encoder for both perspectives; false gives each its own.
    bool shared_rationale_encoder = true;
    bool freeze_encoders = false;

    void validate() const;
    std::vector<int> hidden() const;
    nn::EncoderConfig encoder_config() const;
};

nlohmann::json to_json(const HyperParams& hp);
/// Missing keys keep their defaults.
HyperParams hyperparams_from_json(const nlohmann::json& j);

}  // namespace argnet::model
