#pragma once

#include <vector>

#include "argnet/nn/graph.hpp"

namespace argnet::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// Global gradient-norm clip; <= 0 disables.
    double clip_norm = 1.0;
};

class Adam {
public:
    /// `trainable[i] == false` freezes parameter i.
    Adam(const ParameterSet& params, AdamConfig cfg, std::vector<bool> trainable = {});

    void step(ParameterSet& params, const Gradients& grads);
    long steps() const noexcept { return t_; }
    const AdamConfig& config() const noexcept { return cfg_; }

private:
    AdamConfig cfg_;
    std::vector<bool> trainable_;
    std::vector<Matrix> m_, v_;
    long t_ = 0;
};

}  // namespace argnet::nn
