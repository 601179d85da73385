#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace argnet::nn {

using Matrix = Eigen::MatrixXd;
/// Row mask: 1 = real token, 0 = padding.
using Mask = std::vector<std::uint8_t>;
using Rng = std::mt19937_64;

/// A named trainable tensor. `index` is its slot in the owning ParameterSet.
struct Parameter {
    std::string name;
    Matrix value;
    std::size_t index = 0;
};

/// Owns a model's parameters. Addresses are stable for the set's lifetime.
class ParameterSet {
public:
    ParameterSet() = default;
    ParameterSet(const ParameterSet&) = delete;
    ParameterSet& operator=(const ParameterSet&) = delete;

    Parameter& add(std::string name, Matrix init);
    std::size_t size() const noexcept { return params_.size(); }
    Parameter& operator[](std::size_t i) { return *params_[i]; }
    const Parameter& operator[](std::size_t i) const { return *params_[i]; }
    Parameter* find(std::string_view name) noexcept;
    const Parameter* find(std::string_view name) const noexcept;

    std::size_t scalar_count() const noexcept;
    std::vector<Matrix> snapshot() const;
    void restore(const std::vector<Matrix>& values);

private:
    std::vector<std::unique_ptr<Parameter>> params_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

/// Gradient buffers aligned with a ParameterSet.
class Gradients {
public:
    explicit Gradients(const ParameterSet& params);
    Matrix& operator[](std::size_t i) { return grads_[i]; }
    const Matrix& operator[](std::size_t i) const { return grads_[i]; }
    std::size_t size() const noexcept { return grads_.size(); }
    void zero();
    void scale(double s);
    void add(const Gradients& other);

private:
    std::vector<Matrix> grads_;
};

class Graph;

/// Handle to a node in a Graph. Cheap to copy; valid while the graph lives.
class Var {
public:
    Var() = default;
    const Matrix& value() const;
    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }
    double scalar() const { return value()(0, 0); }
    int id() const noexcept { return id_; }
    Graph* graph() const noexcept { return graph_; }
    bool valid() const noexcept { return graph_ != nullptr; }

private:
    friend class Graph;
    Var(Graph* g, int id) : graph_(g), id_(id) {}
    Graph* graph_ = nullptr;
    int id_ = -1;
};

/// Reverse-mode tape. Values are computed eagerly as ops are recorded;
/// backward() replays the tape in reverse and deposits parameter gradients.
class Graph {
public:
    using BackwardFn = std::function<void(Graph&, int self)>;

    Var constant(Matrix value);
    Var scalar(double v);
    /// Leaf bound to `p`. Repeated calls for the same parameter return the same node.
    Var param(const Parameter& p);

    /// Records a computed node. `fn` propagates grad(self) into its inputs.
    Var push(Matrix value, BackwardFn fn);

    const Matrix& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    /// Gradient accumulator of a node, zero-initialised on first access.
    Matrix& grad(int id);
    bool has_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].has_grad; }

    /// Seeds d(root)/d(root) = 1 (root must be 1x1) and accumulates every
    /// parameter's gradient into `out`.
    void backward(Var root, Gradients& out);

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        BackwardFn backward;
        const Parameter* param = nullptr;
        bool has_grad = false;
    };
    std::vector<Node> nodes_;
    std::unordered_map<const Parameter*, int> param_nodes_;
};

/// Forward-pass mode. Dropout is active only when `rng` is set.
struct Mode {
    Rng* rng = nullptr;
    bool training() const noexcept { return rng != nullptr; }
};

inline Mode eval_mode() { return Mode{}; }

}  // namespace argnet::nn
