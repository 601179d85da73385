#include "argnet/nn/adam.hpp"

#include <cmath>

#include "argnet/util/error.hpp"

namespace argnet::nn {

Adam::Adam(const ParameterSet& params, AdamConfig cfg, std::vector<bool> trainable)
    : cfg_(cfg), trainable_(std::move(trainable)) {
    if (trainable_.empty()) trainable_.assign(params.size(), true);
    if (trainable_.size() != params.size()) throw ValidationError("Adam: trainable mask size mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_.push_back(Matrix::Zero(params[i].value.rows(), params[i].value.cols()));
        v_.push_back(Matrix::Zero(params[i].value.rows(), params[i].value.cols()));
    }
}

void Adam::step(ParameterSet& params, const Gradients& grads) {
    double scale = 1.0;
    if (cfg_.clip_norm > 0) {
        double sq = 0;
        for (std::size_t i = 0; i < grads.size(); ++i) {
            if (trainable_[i]) sq += grads[i].squaredNorm();
        }
        const double norm = std::sqrt(sq);
        if (norm > cfg_.clip_norm) scale = cfg_.clip_norm / norm;
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!trainable_[i]) continue;
        const Matrix g = grads[i] * scale;
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
        params[i].value.array() -=
            cfg_.lr * (m_[i].array() / bc1) / ((v_[i].array() / bc2).sqrt() + cfg_.eps);
    }
}

}  // namespace argnet::nn
