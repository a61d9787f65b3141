// SPDX-License-Identifier: Apache-2.0
#include "mude/encoder.hpp"

#include <cmath>

#include "mude/vocab.hpp"

namespace mude {

namespace {

constexpr double kMaskBias = -1e9;

// Scaled dot-product attention for all heads of one layer over a flattened
// [W*M x d_c] state matrix; returns the head concatenation, same shape.
// key_bias is 0 for real key positions and kMaskBias for padded ones.
Tensor attention_block(Tape& tape, const Tensor& x_flat, const EncoderLayer& layer,
                       const Tensor& key_bias, int64_t n_words, int64_t n_chars) {
  const int64_t d = layer.heads[0].q.dim(0);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Tensor> head_outs;
  head_outs.reserve(layer.heads.size());
  for (const AttentionHead& head : layer.heads) {
    Tensor q = matmul(tape, x_flat, transpose(tape, head.q)).reshaped({n_words, n_chars, d});
    Tensor k = matmul(tape, x_flat, transpose(tape, head.k)).reshaped({n_words, n_chars, d});
    Tensor v = matmul(tape, x_flat, transpose(tape, head.v)).reshaped({n_words, n_chars, d});
    Tensor scores = scale(tape, bmm(tape, q, transpose(tape, k)), inv_sqrt_d);
    Tensor weights = softmax(tape, add(tape, scores, key_bias));
    head_outs.push_back(bmm(tape, weights, v).reshaped({n_words * n_chars, d}));
  }
  return concat_cols(tape, head_outs);
}

// Additive key mask [W x M x M]: column j of word w is 0 when real,
// kMaskBias when padding. Constant (no gradient).
Tensor make_key_bias(const std::vector<double>& char_mask, int64_t n_words, int64_t n_chars) {
  Tensor bias({n_words, n_chars, n_chars});
  double* bp = bias.data();
  for (int64_t w = 0; w < n_words; ++w)
    for (int64_t i = 0; i < n_chars; ++i)
      for (int64_t j = 0; j < n_chars; ++j)
        bp[(w * n_chars + i) * n_chars + j] =
            char_mask[static_cast<size_t>(w * n_chars + j)] > 0.0 ? 0.0 : kMaskBias;
  return bias;
}

}  // namespace

void EncoderConfig::validate() const {
  if (d_c <= 0 || heads <= 0 || layers < 0 || d_ff <= 0)
    throw ConfigError("encoder config: dimensions must be positive");
  if (d_c % heads != 0) throw ConfigError("encoder config: d_c must be divisible by heads");
}

EncoderParams EncoderParams::init(const EncoderConfig& config, int64_t char_vocab, Rng& rng) {
  config.validate();
  EncoderParams p;
  p.config = config;
  p.embedding = init_param({char_vocab, config.d_c}, rng);
  for (int64_t l = 0; l < config.layers; ++l) {
    EncoderLayer layer;
    for (int64_t h = 0; h < config.heads; ++h) {
      AttentionHead head;
      head.q = init_param({config.head_dim(), config.d_c}, rng);
      head.k = init_param({config.head_dim(), config.d_c}, rng);
      head.v = init_param({config.head_dim(), config.d_c}, rng);
      layer.heads.push_back(std::move(head));
    }
    layer.w1 = init_param({config.d_ff, config.d_c}, rng);
    layer.w2 = init_param({config.d_c, config.d_ff}, rng);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

void EncoderParams::collect(const std::string& prefix, ParamSet& out) {
  out.add(prefix + "E", embedding);
  for (size_t l = 0; l < layers.size(); ++l) {
    const std::string lp = prefix + "layer" + std::to_string(l) + ".";
    for (size_t h = 0; h < layers[l].heads.size(); ++h) {
      const std::string hp = lp + "head" + std::to_string(h) + ".";
      out.add(hp + "Q", layers[l].heads[h].q);
      out.add(hp + "K", layers[l].heads[h].k);
      out.add(hp + "V", layers[l].heads[h].v);
    }
    out.add(lp + "W1", layers[l].w1);
    out.add(lp + "W2", layers[l].w2);
  }
}

EncoderOut encode_words(Tape& tape, const EncoderParams& params,
                        const std::vector<int32_t>& char_ids, const std::vector<double>& char_mask,
                        int64_t n_words, int64_t n_chars) {
  if (static_cast<int64_t>(char_ids.size()) != n_words * n_chars ||
      char_mask.size() != char_ids.size())
    throw ShapeError("encode_words: grid size mismatch");
  const int64_t rows = n_words * n_chars;
  std::vector<int64_t> idx(char_ids.begin(), char_ids.end());
  Tensor mask_col({rows}, std::vector<double>(char_mask));

  Tensor x = gather_rows(tape, params.embedding, std::move(idx));
  x = scale_rows(tape, x, mask_col);
  Tensor key_bias = make_key_bias(char_mask, n_words, n_chars);

  for (const EncoderLayer& layer : params.layers) {
    Tensor z = attention_block(tape, x, layer, key_bias, n_words, n_chars);
    if (params.config.residual) z = add(tape, z, x);
    if (params.config.layer_norm) z = layer_norm(tape, z);
    Tensor p = position_feedforward(tape, z, layer.w1, layer.w2);
    if (params.config.residual) p = add(tape, p, z);
    if (params.config.layer_norm) p = layer_norm(tape, p);
    x = scale_rows(tape, p, mask_col);
  }

  EncoderOut out;
  out.char_states = x.reshaped({n_words, n_chars, params.config.d_c});
  out.word_vecs = select_step(tape, out.char_states, 0);
  return out;
}

Tensor embed_chars(Tape& tape, std::span<const int32_t> ids, const Tensor& embedding) {
  std::vector<int64_t> idx(ids.begin(), ids.end());
  return gather_rows(tape, embedding, std::move(idx));
}

Tensor multi_head_attention(Tape& tape, const Tensor& x, const EncoderLayer& layer,
                            std::span<const double> mask) {
  if (x.ndim() != 2) throw ShapeError("multi_head_attention: expected [m x d_c]");
  const int64_t m = x.dim(0);
  if (static_cast<int64_t>(mask.size()) != m)
    throw ShapeError("multi_head_attention: mask length mismatch");
  bool any_real = false;
  for (double v : mask) any_real = any_real || v > 0.0;
  if (!any_real) throw NumericError("multi_head_attention: all positions masked");
  std::vector<double> mask_vec(mask.begin(), mask.end());
  Tensor key_bias = make_key_bias(mask_vec, 1, m);
  return attention_block(tape, x, layer, key_bias, 1, m);
}

Tensor position_feedforward(Tape& tape, const Tensor& z, const Tensor& w1, const Tensor& w2) {
  Tensor inner = relu(tape, matmul(tape, z, transpose(tape, w1)));
  return matmul(tape, inner, transpose(tape, w2));
}

EncoderOut encode_word(Tape& tape, const EncoderParams& params, std::span<const int32_t> ids) {
  if (ids.empty() || ids.front() != CharVocab::kAgg)
    throw ShapeError("encode_word: ids must start with the AGG marker");
  const int64_t m = static_cast<int64_t>(ids.size());
  std::vector<int32_t> grid(ids.begin(), ids.end());
  std::vector<double> mask(static_cast<size_t>(m), 1.0);
  EncoderOut out = encode_words(tape, params, grid, mask, 1, m);
  out.word_vecs = out.word_vecs.reshaped({params.config.d_c});
  return out;
}

}  // namespace mude
