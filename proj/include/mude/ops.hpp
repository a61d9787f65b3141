// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mude/tape.hpp"
#include "mude/tensor.hpp"

namespace mude {

// Differentiable tensor ops. Every op runs its forward pass unconditionally
// and records a backward closure on the tape when recording is on and some
// input requires gradients. Shapes are checked strictly; there is no implicit
// broadcasting beyond the explicitly named variants (add_bias, scale_rows).

Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
Tensor mul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor scale(Tape& tape, const Tensor& a, double c);
Tensor add_scalar(Tape& tape, const Tensor& a, double c);

// x: [..., d], bias: [d]; adds the bias to every row.
Tensor add_bias(Tape& tape, const Tensor& x, const Tensor& bias);

// x: [r, d], s: [r]; multiplies row i by s[i].
Tensor scale_rows(Tape& tape, const Tensor& x, const Tensor& s);

Tensor relu(Tape& tape, const Tensor& x);
Tensor sigmoid(Tape& tape, const Tensor& x);
Tensor tanh(Tape& tape, const Tensor& x);

// [m, k] x [k, n] -> [m, n].
Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);

// [b, m, k] x [b, k, n] -> [b, m, n].
Tensor bmm(Tape& tape, const Tensor& a, const Tensor& b);

// Swaps the last two axes (materialized).
Tensor transpose(Tape& tape, const Tensor& x);

// Softmax over the last axis, computed with max subtraction. Rejects
// non-finite inputs.
Tensor softmax(Tape& tape, const Tensor& x);

// Normalizes the last axis to zero mean / unit variance (no affine part).
Tensor layer_norm(Tape& tape, const Tensor& x, double eps = 1e-5);

// Concatenates along the last axis; leading dims must agree.
Tensor concat_cols(Tape& tape, const std::vector<Tensor>& parts);

// x: [b, n, d] -> [b, d], the slice at position t of axis 1.
Tensor select_step(Tape& tape, const Tensor& x, int64_t t);

// steps: T tensors [b, d] -> [b, T, d].
Tensor stack_steps(Tape& tape, const std::vector<Tensor>& steps);

// x: [r, d], idx: [m] row ids -> [m, d]. Duplicate ids are fine (backward
// accumulates).
Tensor gather_rows(Tape& tape, const Tensor& x, std::vector<int64_t> idx);

// x: [w, d] placed at distinct target rows of a zero [out_rows, d] tensor.
Tensor scatter_rows(Tape& tape, const Tensor& x, std::vector<int64_t> rows, int64_t out_rows);

// Sum of all elements -> scalar.
Tensor sum(Tape& tape, const Tensor& x);

// probs: [r, c] rows of probability distributions; loss = sum_i w[i] *
// -log(max(probs[i, y[i]], 1e-12)). Weights encode masking and averaging.
Tensor nll_loss(Tape& tape, const Tensor& probs, std::vector<int64_t> targets,
                std::vector<double> weights);

// Literal linear form: sum_i w[i] * -probs[i, y[i]].
Tensor neg_prob_loss(Tape& tape, const Tensor& probs, std::vector<int64_t> targets,
                     std::vector<double> weights);

// Argmax over the last axis; ties resolve to the lowest index.
std::vector<int64_t> argmax_rows(const Tensor& x);

}  // namespace mude
