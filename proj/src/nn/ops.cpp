#include "argnet/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "argnet/util/error.hpp"

namespace argnet::nn::ops {

namespace {

void require_same_graph(Var a, Var b) {
    if (a.graph() != b.graph()) throw ValidationError("ops: operands from different graphs");
}

void require_shape(bool ok, const char* op) {
    if (!ok) throw ValidationError(std::string("ops::") + op + ": shape mismatch");
}

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)

}  // namespace

double sigmoid(double x) noexcept {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double clamp_prob(double p, double eps) noexcept { return std::clamp(p, eps, 1.0 - eps); }

double bce_value(double p, double target, double eps) noexcept {
    const double q = clamp_prob(p, eps);
    return -target * std::log(q) - (1.0 - target) * std::log(1.0 - q);
}

Var matmul(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.cols() == b.rows(), "matmul");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    return g.push(a.value() * b.value(), [ia, ib](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia).noalias() += d * g.value(ib).transpose();
        g.grad(ib).noalias() += g.value(ia).transpose() * d;
    });
}

Var matmul_nt(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.cols() == b.cols(), "matmul_nt");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    return g.push(a.value() * b.value().transpose(), [ia, ib](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia).noalias() += d * g.value(ib);
        g.grad(ib).noalias() += d.transpose() * g.value(ia);
    });
}

Var add(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "add");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    return g.push(a.value() + b.value(), [ia, ib](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia) += d;
        g.grad(ib) += d;
    });
}

Var sub(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "sub");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    return g.push(a.value() - b.value(), [ia, ib](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia) += d;
        g.grad(ib) -= d;
    });
}

Var hadamard(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    return g.push(a.value().cwiseProduct(b.value()), [ia, ib](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia) += d.cwiseProduct(g.value(ib));
        g.grad(ib) += d.cwiseProduct(g.value(ia));
    });
}

Var add_row(Var a, Var row) {
    require_same_graph(a, row);
    require_shape(row.rows() == 1 && row.cols() == a.cols(), "add_row");
    Graph& g = *a.graph();
    const int ia = a.id(), ir = row.id();
    Matrix out = a.value();
    out.rowwise() += row.value().row(0);
    return g.push(std::move(out), [ia, ir](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ia) += d;
        g.grad(ir) += d.colwise().sum();
    });
}

Var scale(Var a, double c) {
    Graph& g = *a.graph();
    const int ia = a.id();
    return g.push(a.value() * c, [ia, c](Graph& g, int self) { g.grad(ia) += c * g.grad(self); });
}

Var mul_scalar(Var s, Var a) {
    require_same_graph(s, a);
    require_shape(s.rows() == 1 && s.cols() == 1, "mul_scalar");
    Graph& g = *a.graph();
    const int is = s.id(), ia = a.id();
    return g.push(s.scalar() * a.value(), [is, ia](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(is)(0, 0) += d.cwiseProduct(g.value(ia)).sum();
        g.grad(ia) += g.value(is)(0, 0) * d;
    });
}

Var sigmoid(Var a) {
    Graph& g = *a.graph();
    const int ia = a.id();
    Matrix out = a.value().unaryExpr([](double x) { return sigmoid(x); });
    return g.push(std::move(out), [ia](Graph& g, int self) {
        const Matrix& y = g.value(self);
        g.grad(ia) += g.grad(self).cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
    });
}

Var gelu(Var a) {
    Graph& g = *a.graph();
    const int ia = a.id();
    Matrix out = a.value().unaryExpr([](double x) {
        return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + 0.044715 * x * x * x)));
    });
    return g.push(std::move(out), [ia](Graph& g, int self) {
        const Matrix& x = g.value(ia);
        Matrix dx = x.unaryExpr([](double v) {
            const double u = kGeluC * (v + 0.044715 * v * v * v);
            const double t = std::tanh(u);
            const double du = kGeluC * (1.0 + 3.0 * 0.044715 * v * v);
            return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du;
        });
        g.grad(ia) += g.grad(self).cwiseProduct(dx);
    });
}

Var transpose(Var a) {
    Graph& g = *a.graph();
    const int ia = a.id();
    return g.push(a.value().transpose(), [ia](Graph& g, int self) { g.grad(ia) += g.grad(self).transpose(); });
}

Var masked_softmax_rows(Var a, const Mask& col_mask) {
    require_shape(static_cast<Eigen::Index>(col_mask.size()) == a.cols(), "masked_softmax_rows");
    if (std::none_of(col_mask.begin(), col_mask.end(), [](auto m) { return m != 0; })) {
        throw ValidationError("masked_softmax_rows: every column is masked");
    }
    Graph& g = *a.graph();
    const int ia = a.id();
    const Matrix& x = a.value();
    Matrix p = Matrix::Zero(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (col_mask[static_cast<std::size_t>(c)]) mx = std::max(mx, x(r, c));
        }
        double z = 0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (col_mask[static_cast<std::size_t>(c)]) {
                p(r, c) = std::exp(x(r, c) - mx);
                z += p(r, c);
            }
        }
        p.row(r) /= z;
    }
    return g.push(std::move(p), [ia](Graph& g, int self) {
        const Matrix& y = g.value(self);
        const Matrix& d = g.grad(self);
        const Eigen::VectorXd dot = d.cwiseProduct(y).rowwise().sum();
        Matrix dx = y.cwiseProduct(d.colwise() - dot);
        g.grad(ia) += dx;
    });
}

Var mask_rows(Var a, const Mask& row_mask) {
    require_shape(static_cast<Eigen::Index>(row_mask.size()) == a.rows(), "mask_rows");
    Graph& g = *a.graph();
    const int ia = a.id();
    Matrix out = a.value();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        if (!row_mask[static_cast<std::size_t>(r)]) out.row(r).setZero();
    }
    return g.push(std::move(out), [ia, row_mask](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        Matrix& ga = g.grad(ia);
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            if (row_mask[static_cast<std::size_t>(r)]) ga.row(r) += d.row(r);
        }
    });
}

Var masked_mean_rows(Var a, const Mask& mask) {
    require_shape(static_cast<Eigen::Index>(mask.size()) == a.rows(), "masked_mean_rows");
    const auto n = std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; });
    if (n == 0) throw ValidationError("masked_mean_rows: no unmasked rows");
    Graph& g = *a.graph();
    const int ia = a.id();
    Matrix out = Matrix::Zero(1, a.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        if (mask[static_cast<std::size_t>(r)]) out += a.value().row(r);
    }
    const double inv = 1.0 / static_cast<double>(n);
    out *= inv;
    return g.push(std::move(out), [ia, mask, inv](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        Matrix& ga = g.grad(ia);
        for (Eigen::Index r = 0; r < ga.rows(); ++r) {
            if (mask[static_cast<std::size_t>(r)]) ga.row(r) += inv * d.row(0);
        }
    });
}

Var layer_norm_rows(Var a, Var gamma, Var beta, double eps) {
    require_shape(gamma.rows() == 1 && gamma.cols() == a.cols() && beta.rows() == 1 && beta.cols() == a.cols(),
                  "layer_norm_rows");
    Graph& g = *a.graph();
    const int ia = a.id(), ig = gamma.id(), ib = beta.id();
    const Matrix& x = a.value();
    const auto n = static_cast<double>(x.cols());
    Matrix xhat(x.rows(), x.cols());
    Eigen::VectorXd inv_std(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double mean = x.row(r).mean();
        const double var = (x.row(r).array() - mean).square().sum() / n;
        inv_std(r) = 1.0 / std::sqrt(var + eps);
        xhat.row(r) = (x.row(r).array() - mean) * inv_std(r);
    }
    Matrix out = xhat.array().rowwise() * gamma.value().row(0).array();
    out.rowwise() += beta.value().row(0);
    return g.push(std::move(out), [ia, ig, ib, xhat, inv_std, n](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        g.grad(ig) += d.cwiseProduct(xhat).colwise().sum();
        g.grad(ib) += d.colwise().sum();
        const Matrix dxhat = d.array().rowwise() * g.value(ig).row(0).array();
        Matrix& ga = g.grad(ia);
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            const double m1 = dxhat.row(r).sum() / n;
            const double m2 = dxhat.row(r).cwiseProduct(xhat.row(r)).sum() / n;
            ga.row(r).array() += inv_std(r) * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
        }
    });
}

Var gather_rows(Var table, std::span<const int> ids) {
    Graph& g = *table.graph();
    const int it = table.id();
    const Matrix& t = table.value();
    Matrix out(static_cast<Eigen::Index>(ids.size()), t.cols());
    std::vector<int> idx(ids.begin(), ids.end());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= t.rows()) throw ValidationError("gather_rows: index out of range");
        out.row(static_cast<Eigen::Index>(i)) = t.row(idx[i]);
    }
    return g.push(std::move(out), [it, idx = std::move(idx)](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        Matrix& gt = g.grad(it);
        for (std::size_t i = 0; i < idx.size(); ++i) gt.row(idx[i]) += d.row(static_cast<Eigen::Index>(i));
    });
}

Var concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ValidationError("concat_cols: no inputs");
    Graph& g = *parts.front().graph();
    Eigen::Index cols = 0;
    for (const auto& p : parts) {
        require_same_graph(parts.front(), p);
        require_shape(p.rows() == parts.front().rows(), "concat_cols");
        cols += p.cols();
    }
    Matrix out(parts.front().rows(), cols);
    std::vector<std::pair<int, Eigen::Index>> spans;
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.middleCols(at, p.cols()) = p.value();
        spans.emplace_back(p.id(), at);
        at += p.cols();
    }
    return g.push(std::move(out), [spans = std::move(spans)](Graph& g, int self) {
        const Matrix& d = g.grad(self);
        for (const auto& [id, start] : spans) {
            Matrix& gp = g.grad(id);
            gp += d.middleCols(start, gp.cols());
        }
    });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
    require_shape(start >= 0 && count >= 0 && start + count <= a.cols(), "slice_cols");
    Graph& g = *a.graph();
    const int ia = a.id();
    return g.push(a.value().middleCols(start, count), [ia, start, count](Graph& g, int self) {
        g.grad(ia).middleCols(start, count) += g.grad(self);
    });
}

Var dropout(Var a, double rate, Rng& rng) {
    if (rate <= 0) return a;
    Graph& g = *a.graph();
    const int ia = a.id();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double keep = 1.0 - rate;
    Matrix m(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng) < keep ? 1.0 / keep : 0.0;
    Matrix out = a.value().cwiseProduct(m);
    return g.push(std::move(out), [ia, m = std::move(m)](Graph& g, int self) {
        g.grad(ia) += g.grad(self).cwiseProduct(m);
    });
}

Var bce(Var p, double target, double eps) {
    require_shape(p.rows() == 1 && p.cols() == 1, "bce");
    Graph& g = *p.graph();
    const int ip = p.id();
    const double raw = p.scalar();
    return g.push(Matrix::Constant(1, 1, bce_value(raw, target, eps)), [ip, raw, target, eps](Graph& g, int self) {
        if (raw < eps || raw > 1.0 - eps) return;  // clamped: flat
        const double d = -target / raw + (1.0 - target) / (1.0 - raw);
        g.grad(ip)(0, 0) += g.grad(self)(0, 0) * d;
    });
}

Var mse(Var a, Var b) {
    require_same_graph(a, b);
    require_shape(a.rows() == b.rows() && a.cols() == b.cols() && a.value().size() > 0, "mse");
    Graph& g = *a.graph();
    const int ia = a.id(), ib = b.id();
    const Matrix diff = a.value() - b.value();
    const double n = static_cast<double>(diff.size());
    return g.push(Matrix::Constant(1, 1, diff.squaredNorm() / n), [ia, ib, diff, n](Graph& g, int self) {
        const double d = g.grad(self)(0, 0);
        g.grad(ia) += (2.0 * d / n) * diff;
        g.grad(ib) -= (2.0 * d / n) * diff;
    });
}

Var add_scalars(const std::vector<Var>& terms) {
    if (terms.empty()) throw ValidationError("add_scalars: no terms");
    Graph& g = *terms.front().graph();
    double total = 0;
    std::vector<int> ids;
    for (const auto& t : terms) {
        require_shape(t.rows() == 1 && t.cols() == 1, "add_scalars");
        total += t.scalar();
        ids.push_back(t.id());
    }
    return g.push(Matrix::Constant(1, 1, total), [ids = std::move(ids)](Graph& g, int self) {
        const double d = g.grad(self)(0, 0);
        for (int id : ids) g.grad(id)(0, 0) += d;
    });
}

}  // namespace argnet::nn::ops
