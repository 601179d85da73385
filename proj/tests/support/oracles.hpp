#pragma once

// Brute-force reference computations used by the unit and acceptance tests.
// Plain loops over std::vector, deliberately sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "argnet/nn/graph.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat from_eigen(const Eigen::MatrixXd& m) {
    Mat out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat out(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

/// softmax((Q Wq)(K Wk)^T / sqrt(d)) (V Wv), keys with kmask 0 skipped,
/// query rows with qmask 0 zeroed.
inline Mat attention(const Mat& q, const Mat& k, const Mat& v, const Mat& wq, const Mat& wk, const Mat& wv,
                     const std::vector<std::uint8_t>& qmask, const std::vector<std::uint8_t>& kmask) {
    const Mat qp = matmul(q, wq), kp = matmul(k, wk), vp = matmul(v, wv);
    const double d = static_cast<double>(wq[0].size());
    Mat out(q.size(), std::vector<double>(vp[0].size(), 0.0));
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!qmask[i]) continue;
        std::vector<double> s(k.size(), 0.0);
        double mx = -1e300;
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (!kmask[j]) continue;
            for (std::size_t c = 0; c < qp[0].size(); ++c) s[j] += qp[i][c] * kp[j][c];
            s[j] /= std::sqrt(d);
            mx = std::max(mx, s[j]);
        }
        double z = 0;
        for (std::size_t j = 0; j < k.size(); ++j) {
            s[j] = kmask[j] ? std::exp(s[j] - mx) : 0.0;
            z += s[j];
        }
        for (std::size_t j = 0; j < k.size(); ++j)
            for (std::size_t c = 0; c < vp[0].size(); ++c) out[i][c] += s[j] / z * vp[j][c];
    }
    return out;
}

inline std::vector<double> masked_mean(const Mat& x, const std::vector<std::uint8_t>& mask) {
    std::vector<double> out(x[0].size(), 0.0);
    double n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!mask[i]) continue;
        n += 1;
        for (std::size_t c = 0; c < x[0].size(); ++c) out[c] += x[i][c];
    }
    for (double& v : out) v /= n;
    return out;
}

inline std::vector<double> attentive_pool(const Mat& x, const std::vector<double>& score,
                                          const std::vector<std::uint8_t>& mask) {
    std::vector<double> e(x.size(), 0.0);
    double mx = -1e300;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!mask[i]) continue;
        for (std::size_t c = 0; c < score.size(); ++c) e[i] += x[i][c] * score[c];
        mx = std::max(mx, e[i]);
    }
    double z = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        e[i] = mask[i] ? std::exp(e[i] - mx) : 0.0;
        z += e[i];
    }
    std::vector<double> out(x[0].size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += e[i] / z * x[i][c];
    return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double bce(double p, double y) {
    p = std::min(std::max(p, 1e-7), 1 - 1e-7);
    return -(y * std::log(p) + (1 - y) * std::log(1 - p));
}

inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

/// Macro F1 straight from the definition: per class, count tp/fp/fn by scanning.
inline double macro_f1(const std::vector<int>& pred, const std::vector<int>& gold, double* acc = nullptr) {
    double f1_sum = 0;
    int correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == gold[i];
    for (int cls = 0; cls < 2; ++cls) {
        double tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            if (pred[i] == cls && gold[i] == cls) tp += 1;
            if (pred[i] == cls && gold[i] != cls) fp += 1;
            if (pred[i] != cls && gold[i] == cls) fn += 1;
        }
        const double p = tp + fp > 0 ? tp / (tp + fp) : 0;
        const double r = tp + fn > 0 ? tp / (tp + fn) : 0;
        f1_sum += p + r > 0 ? 2 * p * r / (p + r) : 0;
    }
    if (acc) *acc = pred.empty() ? 0 : static_cast<double>(correct) / static_cast<double>(pred.size());
    return f1_sum / 2;
}

/// Area under the ROC curve by counting concordant pairs (ties count half).
inline double auc(const std::vector<double>& score, const std::vector<int>& positive) {
    double pairs = 0, good = 0;
    for (std::size_t i = 0; i < score.size(); ++i) {
        if (!positive[i]) continue;
        for (std::size_t j = 0; j < score.size(); ++j) {
            if (positive[j]) continue;
            pairs += 1;
            good += score[i] > score[j] ? 1.0 : score[i] == score[j] ? 0.5 : 0.0;
        }
    }
    return pairs > 0 ? good / pairs : 0.5;
}

struct GradCheck {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double worst_rel = 0;
    std::string worst_name;
};

/// Central differences over every scalar of `params` (or every `stride`-th),
/// compared with the analytic gradient. A scalar fails when
/// |a - n| > rtol * max(|a|, |n|) + atol.
inline GradCheck grad_check(argnet::nn::ParameterSet& params, const std::function<double()>& loss,
                            const argnet::nn::Gradients& analytic, double rtol, double atol = 1e-8,
                            double h = 1e-5, std::size_t stride = 1) {
    GradCheck r;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& value = params[i].value;
        for (Eigen::Index k = 0; k < value.size(); ++k, ++flat) {
            if (flat % stride) continue;
            double& x = value.data()[k];
            const double old = x;
            x = old + h;
            const double lp = loss();
            x = old - h;
            const double lm = loss();
            x = old;
            const double num = (lp - lm) / (2 * h);
            const double an = analytic[i].data()[k];
            const double diff = std::abs(an - num);
            const double scale = std::max(std::abs(an), std::abs(num));
            ++r.checked;
            if (diff > rtol * scale + atol) ++r.failures;
            const double rel = diff / std::max(scale, 1e-7);
            if (diff > atol && rel > r.worst_rel) {
                r.worst_rel = rel;
                r.worst_name = params[i].name;
            }
        }
    }
    return r;
}

}  // namespace oracle
