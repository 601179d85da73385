#include "argnet/nn/graph.hpp"

#include "argnet/util/error.hpp"

namespace argnet::nn {

Parameter& ParameterSet::add(std::string name, Matrix init) {
    if (by_name_.count(name)) throw ValidationError("duplicate parameter name " + name);
    auto p = std::make_unique<Parameter>();
    p->name = std::move(name);
    p->value = std::move(init);
    p->index = params_.size();
    by_name_.emplace(p->name, p->index);
    params_.push_back(std::move(p));
    return *params_.back();
}

Parameter* ParameterSet::find(std::string_view name) noexcept {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterSet::find(std::string_view name) const noexcept {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : params_[it->second].get();
}

std::size_t ParameterSet::scalar_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
    return n;
}

std::vector<Matrix> ParameterSet::snapshot() const {
    std::vector<Matrix> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p->value);
    return out;
}

void ParameterSet::restore(const std::vector<Matrix>& values) {
    if (values.size() != params_.size()) throw ValidationError("snapshot does not match parameter set");
    for (std::size_t i = 0; i < values.size(); ++i) params_[i]->value = values[i];
}

Gradients::Gradients(const ParameterSet& params) {
    grads_.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        grads_.push_back(Matrix::Zero(params[i].value.rows(), params[i].value.cols()));
    }
}

void Gradients::zero() {
    for (auto& g : grads_) g.setZero();
}

void Gradients::scale(double s) {
    for (auto& g : grads_) g *= s;
}

void Gradients::add(const Gradients& other) {
    for (std::size_t i = 0; i < grads_.size(); ++i) grads_[i] += other.grads_[i];
}

const Matrix& Var::value() const { return graph_->value(id_); }

Var Graph::constant(Matrix value) { return push(std::move(value), nullptr); }

Var Graph::scalar(double v) { return constant(Matrix::Constant(1, 1, v)); }

Var Graph::param(const Parameter& p) {
    if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
    Var v = push(p.value, nullptr);
    nodes_.back().param = &p;
    param_nodes_.emplace(&p, v.id());
    return v;
}

Var Graph::push(Matrix value, BackwardFn fn) {
    Node n;
    n.value = std::move(value);
    n.backward = std::move(fn);
    nodes_.push_back(std::move(n));
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Matrix& Graph::grad(int id) {
    auto& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.has_grad) {
        n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
        n.has_grad = true;
    }
    return n.grad;
}

void Graph::backward(Var root, Gradients& out) {
    if (root.graph() != this) throw ValidationError("backward: root belongs to another graph");
    if (root.rows() != 1 || root.cols() != 1) throw ValidationError("backward: root must be a scalar");
    grad(root.id()).setConstant(1.0);
    for (int id = root.id(); id >= 0; --id) {
        auto& n = nodes_[static_cast<std::size_t>(id)];
        if (!n.has_grad) continue;
        if (n.backward) n.backward(*this, id);
        if (n.param) out[n.param->index] += n.grad;
    }
}

}  // namespace argnet::nn
