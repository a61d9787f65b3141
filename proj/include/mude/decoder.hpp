// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "mude/ops.hpp"
#include "mude/optim.hpp"

namespace mude {

struct GruParams {
  // Gate weights: w* act on the input (unused in the default input-less
  // recurrence), u* on the previous hidden state.
  Tensor wz, uz, bz;
  Tensor wr, ur, br;
  Tensor wh, uh, bh;
};

// Character decoder used during training only: a GRU seeded with the word
// representation, emitting one character distribution per step. At test
// time the whole module is dropped from the inference path.
struct DecoderParams {
  GruParams gru;  // hidden size d_c; input size d_c
  Tensor wp;      // emission matrix [C x d_c]
  // When set, the previous target character's embedding drives the GRU
  // input; by default the recurrence takes a constant zero input.
  bool feed_prev_char = false;
  // When set, the loss uses the linear -p[y] form instead of -log p[y].
  bool literal_loss = false;

  static DecoderParams init(int64_t d, int64_t char_vocab, Rng& rng);
  void collect(const std::string& prefix, ParamSet& out);
};

// One GRU step over a row batch [B x d]. x may be null (zero input).
Tensor gru_cell(Tape& tape, const GruParams& params, const Tensor& h_prev, const Tensor* x);

// Teacher-paced decoding for one word: exactly targets.size() steps, no
// sampling. Returns the per-step distributions [T x C].
Tensor decode_train(Tape& tape, const DecoderParams& params, const Tensor& word_vec,
                    std::span<const int32_t> targets, const Tensor* embedding = nullptr);

// Mean over steps of -log p_t[y_t] (or the literal form when configured).
Tensor seq2seq_loss(Tape& tape, const DecoderParams& params, const Tensor& step_probs,
                    std::span<const int32_t> targets);

// Batched training loss over W words with per-word step masks; each word
// contributes the mean over its own steps, averaged over words.
Tensor decoder_loss(Tape& tape, const DecoderParams& params, const Tensor& word_vecs,
                    const std::vector<int32_t>& targets, const std::vector<double>& mask,
                    int64_t n_words, int64_t n_steps, const Tensor* embedding = nullptr);

// Greedy decoding diagnostic: emits argmax characters until EOW or max_len.
std::vector<int32_t> decode_greedy(const DecoderParams& params, const Tensor& word_vec,
                                   int64_t max_len, const Tensor* embedding = nullptr);

}  // namespace mude
