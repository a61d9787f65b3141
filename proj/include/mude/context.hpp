// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "mude/ops.hpp"
#include "mude/optim.hpp"

namespace mude {

struct LstmParams {
  Tensor wi, ui, bi;  // input gate
  Tensor wf, uf, bf;  // forget gate
  Tensor wo, uo, bo;  // output gate
  Tensor wg, ug, bg;  // candidate

  static LstmParams init(int64_t d_h, int64_t d_in, Rng& rng);
  void collect(const std::string& prefix, ParamSet& out);
};

// Word-level context model: bidirectional LSTM over the per-word vectors
// plus the vocabulary prediction layer.
struct ContextParams {
  LstmParams fwd, bwd;
  Tensor ww;  // [V x 2*d_h]

  static ContextParams init(int64_t d_h, int64_t d_in, int64_t word_vocab, Rng& rng);
  void collect(const std::string& prefix, ParamSet& out);
  int64_t hidden() const { return ww.dim(1) / 2; }
};

// One LSTM step over a row batch: returns (h, c).
std::pair<Tensor, Tensor> lstm_cell(Tape& tape, const LstmParams& params, const Tensor& h_prev,
                                    const Tensor& c_prev, const Tensor& x);

// seq: [B x N x d_in]; word_mask has one entry per (b, n) slot. Produces
// [B x N x 2*d_h]; states freeze across padded slots so appending padding
// never changes a real position, and padded outputs are zero.
Tensor bilstm(Tape& tape, const ContextParams& params, const Tensor& seq,
              const std::vector<double>& word_mask);

// p_i = softmax(W^w w_i) over the vocabulary, rowwise.
Tensor predict_words(Tape& tape, const Tensor& reps, const Tensor& ww);

// Mean over unmasked positions of -log p[y]. probs: [R x V].
Tensor prediction_loss(Tape& tape, const Tensor& probs, const std::vector<int32_t>& targets,
                       const std::vector<double>& mask, bool literal = false);

}  // namespace mude
