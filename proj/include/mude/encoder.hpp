// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "mude/ops.hpp"
#include "mude/optim.hpp"

namespace mude {

struct EncoderConfig {
  int64_t d_c = 64;    // character embedding width
  int64_t heads = 4;   // attention heads (d_c must divide evenly)
  int64_t layers = 2;  // stacked attention + feedforward blocks
  int64_t d_ff = 256;  // feedforward inner width
  // Off by default: the base architecture uses neither; available for
  // ablation runs.
  bool residual = false;
  bool layer_norm = false;

  int64_t head_dim() const { return d_c / heads; }
  void validate() const;
};

struct AttentionHead {
  Tensor q, k, v;  // each [head_dim x d_c]
};

struct EncoderLayer {
  std::vector<AttentionHead> heads;
  Tensor w1;  // [d_ff x d_c]
  Tensor w2;  // [d_c x d_ff]
};

// Order-free character encoder: embedding, stacked multi-head attention and
// positionwise feedforward. The input carries no positional signal, so the
// output at the AGG position is exactly invariant to permuting the other
// characters.
struct EncoderParams {
  EncoderConfig config;
  Tensor embedding;  // [C x d_c]
  std::vector<EncoderLayer> layers;

  static EncoderParams init(const EncoderConfig& config, int64_t char_vocab, Rng& rng);
  void collect(const std::string& prefix, ParamSet& out);
};

struct EncoderOut {
  Tensor word_vecs;    // [W x d_c], final AGG states
  Tensor char_states;  // [W x M x d_c]
};

// Batched forward over W words padded to n_chars positions each (AGG first).
// mask marks real positions; padded query rows are zeroed after each layer
// and padded keys are excluded from every softmax.
EncoderOut encode_words(Tape& tape, const EncoderParams& params,
                        const std::vector<int32_t>& char_ids, const std::vector<double>& char_mask,
                        int64_t n_words, int64_t n_chars);

// Embedding lookup: row i of the result is the embedding of ids[i].
Tensor embed_chars(Tape& tape, std::span<const int32_t> ids, const Tensor& embedding);

// One multi-head attention block over a single word's states [m x d_c];
// mask[j] = 1 marks real positions. Throws NumericError when everything is
// masked.
Tensor multi_head_attention(Tape& tape, const Tensor& x, const EncoderLayer& layer,
                            std::span<const double> mask);

// p = relu(z W1^T) W2^T applied independently per row.
Tensor position_feedforward(Tape& tape, const Tensor& z, const Tensor& w1, const Tensor& w2);

// Full encoder over one word; ids must start with AGG. Returns w^c of shape
// [d_c] plus the per-character states.
EncoderOut encode_word(Tape& tape, const EncoderParams& params, std::span<const int32_t> ids);

}  // namespace mude
