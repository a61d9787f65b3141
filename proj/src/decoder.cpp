// SPDX-License-Identifier: Apache-2.0
#include "mude/decoder.hpp"

#include "mude/vocab.hpp"

namespace mude {

DecoderParams DecoderParams::init(int64_t d, int64_t char_vocab, Rng& rng) {
  if (d <= 0 || char_vocab <= 0) throw ConfigError("decoder init: bad dimensions");
  DecoderParams p;
  auto mat = [&](int64_t rows, int64_t cols) { return init_param({rows, cols}, rng); };
  p.gru.wz = mat(d, d);
  p.gru.uz = mat(d, d);
  p.gru.bz = init_param({d}, rng, d);
  p.gru.wr = mat(d, d);
  p.gru.ur = mat(d, d);
  p.gru.br = init_param({d}, rng, d);
  p.gru.wh = mat(d, d);
  p.gru.uh = mat(d, d);
  p.gru.bh = init_param({d}, rng, d);
  p.wp = mat(char_vocab, d);
  return p;
}

void DecoderParams::collect(const std::string& prefix, ParamSet& out) {
  out.add(prefix + "gru.Wz", gru.wz);
  out.add(prefix + "gru.Uz", gru.uz);
  out.add(prefix + "gru.bz", gru.bz);
  out.add(prefix + "gru.Wr", gru.wr);
  out.add(prefix + "gru.Ur", gru.ur);
  out.add(prefix + "gru.br", gru.br);
  out.add(prefix + "gru.Wh", gru.wh);
  out.add(prefix + "gru.Uh", gru.uh);
  out.add(prefix + "gru.bh", gru.bh);
  out.add(prefix + "Wp", wp);
}

Tensor gru_cell(Tape& tape, const GruParams& params, const Tensor& h_prev, const Tensor* x) {
  Tensor pre_z = matmul(tape, h_prev, transpose(tape, params.uz));
  Tensor pre_r = matmul(tape, h_prev, transpose(tape, params.ur));
  if (x) {
    pre_z = add(tape, pre_z, matmul(tape, *x, transpose(tape, params.wz)));
    pre_r = add(tape, pre_r, matmul(tape, *x, transpose(tape, params.wr)));
  }
  Tensor z = sigmoid(tape, add_bias(tape, pre_z, params.bz));
  Tensor r = sigmoid(tape, add_bias(tape, pre_r, params.br));
  Tensor pre_h = matmul(tape, mul(tape, r, h_prev), transpose(tape, params.uh));
  if (x) pre_h = add(tape, pre_h, matmul(tape, *x, transpose(tape, params.wh)));
  Tensor cand = tanh(tape, add_bias(tape, pre_h, params.bh));
  Tensor keep = add_scalar(tape, scale(tape, z, -1.0), 1.0);  // 1 - z
  return add(tape, mul(tape, z, h_prev), mul(tape, keep, cand));
}

namespace {

// Teacher input ids for step t: AGG at t=0, then the previous target.
std::vector<int64_t> teacher_ids(const std::vector<int32_t>& targets, int64_t n_words,
                                 int64_t n_steps, int64_t t) {
  std::vector<int64_t> ids(static_cast<size_t>(n_words));
  for (int64_t w = 0; w < n_words; ++w)
    ids[static_cast<size_t>(w)] =
        t == 0 ? CharVocab::kAgg : targets[static_cast<size_t>(w * n_steps + t - 1)];
  return ids;
}

}  // namespace

Tensor decode_train(Tape& tape, const DecoderParams& params, const Tensor& word_vec,
                    std::span<const int32_t> targets, const Tensor* embedding) {
  if (targets.empty()) throw ShapeError("decode_train: empty target");
  if (targets.back() != CharVocab::kEow)
    throw DataError("decode_train: decoder target must end with EOW");
  const int64_t d = word_vec.size();
  const int64_t n_steps = static_cast<int64_t>(targets.size());
  std::vector<int32_t> flat(targets.begin(), targets.end());
  std::vector<double> mask(targets.size(), 1.0);
  Tensor h = word_vec.reshaped({1, d});

  std::vector<Tensor> probs;
  probs.reserve(static_cast<size_t>(n_steps));
  for (int64_t t = 0; t < n_steps; ++t) {
    Tensor x;
    const Tensor* x_ptr = nullptr;
    if (params.feed_prev_char) {
      if (!embedding) throw ConfigError("decode_train: feed_prev_char needs the embedding");
      x = gather_rows(tape, *embedding, teacher_ids(flat, 1, n_steps, t));
      x_ptr = &x;
    }
    h = gru_cell(tape, params.gru, h, x_ptr);
    probs.push_back(softmax(tape, matmul(tape, h, transpose(tape, params.wp))));
  }
  const int64_t c = params.wp.dim(0);
  return stack_steps(tape, probs).reshaped({n_steps, c});
}

Tensor seq2seq_loss(Tape& tape, const DecoderParams& params, const Tensor& step_probs,
                    std::span<const int32_t> targets) {
  if (step_probs.ndim() != 2 || step_probs.dim(0) != static_cast<int64_t>(targets.size()))
    throw ShapeError("seq2seq_loss: one probability row per target step required");
  const int64_t n_steps = step_probs.dim(0);
  std::vector<int64_t> tgt(targets.begin(), targets.end());
  std::vector<double> weights(targets.size(), 1.0 / static_cast<double>(n_steps));
  return params.literal_loss ? neg_prob_loss(tape, step_probs, std::move(tgt), std::move(weights))
                             : nll_loss(tape, step_probs, std::move(tgt), std::move(weights));
}

Tensor decoder_loss(Tape& tape, const DecoderParams& params, const Tensor& word_vecs,
                    const std::vector<int32_t>& targets, const std::vector<double>& mask,
                    int64_t n_words, int64_t n_steps, const Tensor* embedding) {
  if (word_vecs.ndim() != 2 || word_vecs.dim(0) != n_words)
    throw ShapeError("decoder_loss: word_vecs must be [W x d]");
  if (static_cast<int64_t>(targets.size()) != n_words * n_steps || mask.size() != targets.size())
    throw ShapeError("decoder_loss: target grid mismatch");

  // Each word contributes the mean over its own steps; words are averaged.
  std::vector<double> word_steps(static_cast<size_t>(n_words), 0.0);
  int64_t live_words = 0;
  for (int64_t w = 0; w < n_words; ++w) {
    double count = 0.0;
    for (int64_t t = 0; t < n_steps; ++t) count += mask[static_cast<size_t>(w * n_steps + t)];
    word_steps[static_cast<size_t>(w)] = count;
    if (count > 0.0) ++live_words;
  }
  if (live_words == 0) throw DataError("decoder_loss: no unmasked decoder steps");

  Tensor h = word_vecs;
  Tensor total = Tensor::scalar(0.0);
  for (int64_t t = 0; t < n_steps; ++t) {
    Tensor x;
    const Tensor* x_ptr = nullptr;
    if (params.feed_prev_char) {
      if (!embedding) throw ConfigError("decoder_loss: feed_prev_char needs the embedding");
      x = gather_rows(tape, *embedding, teacher_ids(targets, n_words, n_steps, t));
      x_ptr = &x;
    }
    h = gru_cell(tape, params.gru, h, x_ptr);
    Tensor probs = softmax(tape, matmul(tape, h, transpose(tape, params.wp)));
    std::vector<int64_t> tgt(static_cast<size_t>(n_words));
    std::vector<double> weights(static_cast<size_t>(n_words));
    for (int64_t w = 0; w < n_words; ++w) {
      tgt[static_cast<size_t>(w)] = targets[static_cast<size_t>(w * n_steps + t)];
      const double m = mask[static_cast<size_t>(w * n_steps + t)];
      weights[static_cast<size_t>(w)] =
          m > 0.0 ? m / (word_steps[static_cast<size_t>(w)] * static_cast<double>(live_words))
                  : 0.0;
    }
    Tensor step_loss = params.literal_loss
                           ? neg_prob_loss(tape, probs, std::move(tgt), std::move(weights))
                           : nll_loss(tape, probs, std::move(tgt), std::move(weights));
    total = add(tape, total, step_loss);
  }
  return total;
}

std::vector<int32_t> decode_greedy(const DecoderParams& params, const Tensor& word_vec,
                                   int64_t max_len, const Tensor* embedding) {
  if (max_len <= 0) throw ConfigError("decode_greedy: max_len must be > 0");
  Tape tape;
  tape.set_recording(false);
  const int64_t d = word_vec.size();
  Tensor h = word_vec.reshaped({1, d});
  std::vector<int32_t> out;
  int32_t prev = CharVocab::kAgg;
  for (int64_t t = 0; t < max_len; ++t) {
    Tensor x;
    const Tensor* x_ptr = nullptr;
    if (params.feed_prev_char) {
      if (!embedding) throw ConfigError("decode_greedy: feed_prev_char needs the embedding");
      x = gather_rows(tape, *embedding, {prev});
      x_ptr = &x;
    }
    h = gru_cell(tape, params.gru, h, x_ptr);
    Tensor logits = matmul(tape, h, transpose(tape, params.wp));
    const int32_t id = static_cast<int32_t>(argmax_rows(logits)[0]);
    if (id == CharVocab::kEow) break;
    out.push_back(id);
    prev = id;
  }
  return out;
}

}  // namespace mude
