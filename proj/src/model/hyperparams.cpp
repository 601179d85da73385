#include "argnet/model/hyperparams.hpp"

#include "argnet/util/error.hpp"

namespace argnet::model {

void HyperParams::validate() const {
    if (d <= 0 || heads <= 0 || d % heads != 0) throw ValidationError("hyperparams: d must be divisible by heads");
    if (beta1 < 0 || beta2 < 0) throw ValidationError("hyperparams: beta1 and beta2 must be >= 0");
    if (max_tokens < 1) throw ValidationError("hyperparams: max_tokens must be >= 1");
    if (dropout < 0 || dropout >= 1) throw ValidationError("hyperparams: dropout must lie in [0, 1)");
    if (encoder_layers < 0 || ffn_mult < 1) throw ValidationError("hyperparams: bad encoder shape");
    for (int w : mlp_hidden) {
        if (w <= 0) throw ValidationError("hyperparams: mlp widths must be positive");
    }
}

std::vector<int> HyperParams::hidden() const { return mlp_hidden.empty() ? std::vector<int>{d} : mlp_hidden; }

nn::EncoderConfig HyperParams::encoder_config() const {
    nn::EncoderConfig c;
    c.vocab_size = vocab_size;
    c.dim = d;
    c.heads = heads;
    c.layers = encoder_layers;
    c.ffn_dim = ffn_mult * d;
    c.max_tokens = max_tokens;
    c.pad_multiple = pad_multiple;
    c.dropout = dropout;
    return c;
}

nlohmann::json to_json(const HyperParams& hp) {
    return {
        {"d", hp.d},
        {"heads", hp.heads},
        {"max_tokens", hp.max_tokens},
        {"beta1", hp.beta1},
        {"beta2", hp.beta2},
        {"mlp_hidden", hp.mlp_hidden},
        {"dropout", hp.dropout},
        {"vocab_size", hp.vocab_size},
        {"encoder_layers", hp.encoder_layers},
        {"ffn_mult", hp.ffn_mult},
        {"pad_multiple", hp.pad_multiple},
        {"shared_rationale_encoder", hp.shared_rationale_encoder},
        {"freeze_encoders", hp.freeze_encoders},
    };
}

HyperParams hyperparams_from_json(const nlohmann::json& j) {
    HyperParams hp;
    auto get = [&](const char* key, auto& field) {
        if (auto it = j.find(key); it != j.end()) it->get_to(field);
    };
    get("d", hp.d);
    get("heads", hp.heads);
    get("max_tokens", hp.max_tokens);
    get("beta1", hp.beta1);
    get("beta2", hp.beta2);
    get("mlp_hidden", hp.mlp_hidden);
    get("dropout", hp.dropout);
    get("vocab_size", hp.vocab_size);
    get("encoder_layers", hp.encoder_layers);
    get("ffn_mult", hp.ffn_mult);
    get("pad_multiple", hp.pad_multiple);
    get("shared_rationale_encoder", hp.shared_rationale_encoder);
    get("freeze_encoders", hp.freeze_encoders);
    hp.validate();
    return hp;
}

}  // namespace argnet::model
