#pragma once

#include <span>
#include <vector>

#include "argnet/nn/graph.hpp"

namespace argnet::nn::ops {

inline constexpr double kProbEps = 1e-7;

Var matmul(Var a, Var b);
/// a * b^T
Var matmul_nt(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
/// Adds the 1 x cols row `row` to every row of `a`.
Var add_row(Var a, Var row);
Var scale(Var a, double c);
/// `s` is 1x1; returns s * a.
Var mul_scalar(Var s, Var a);
Var sigmoid(Var a);
/// tanh approximation of GELU.
Var gelu(Var a);
Var transpose(Var a);

/// Row-wise softmax over columns with col_mask[j] != 0. Masked columns get
/// exactly zero weight. Requires at least one unmasked column.
Var masked_softmax_rows(Var a, const Mask& col_mask);
/// Zeroes rows where row_mask[i] == 0.
Var mask_rows(Var a, const Mask& row_mask);
/// Mean of rows with mask[i] != 0, as a 1 x cols row.
Var masked_mean_rows(Var a, const Mask& mask);

Var layer_norm_rows(Var a, Var gamma, Var beta, double eps = 1e-5);
/// Rows of `table` selected by `ids`.
Var gather_rows(Var table, std::span<const int> ids);
Var concat_cols(const std::vector<Var>& parts);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
/// Inverted dropout; identity when rate == 0.
Var dropout(Var a, double rate, Rng& rng);

/// Binary cross-entropy -y ln p - (1-y) ln(1-p), p clamped to [eps, 1-eps].
Var bce(Var p, double target, double eps = kProbEps);
/// Mean over all entries of (a - b)^2, as 1x1.
Var mse(Var a, Var b);
/// Sum of 1x1 nodes.
Var add_scalars(const std::vector<Var>& terms);

// Plain value helpers shared with the graph ops.
double sigmoid(double x) noexcept;
double bce_value(double p, double target, double eps = kProbEps) noexcept;
double clamp_prob(double p, double eps = kProbEps) noexcept;

}  // namespace argnet::nn::ops
