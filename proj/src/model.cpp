// SPDX-License-Identifier: Apache-2.0
#include "mude/model.hpp"

#include "mude/unicode.hpp"

namespace mude {

nlohmann::json ModelConfig::to_json() const {
  return {{"d_c", encoder.d_c},
          {"heads", encoder.heads},
          {"layers", encoder.layers},
          {"d_ff", encoder.d_ff},
          {"residual", encoder.residual},
          {"layer_norm", encoder.layer_norm},
          {"d_h", d_h},
          {"feed_prev_char", feed_prev_char},
          {"literal_seq_loss", literal_seq_loss}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.encoder.d_c = j.value("d_c", c.encoder.d_c);
  c.encoder.heads = j.value("heads", c.encoder.heads);
  c.encoder.layers = j.value("layers", c.encoder.layers);
  c.encoder.d_ff = j.value("d_ff", c.encoder.d_ff);
  c.encoder.residual = j.value("residual", c.encoder.residual);
  c.encoder.layer_norm = j.value("layer_norm", c.encoder.layer_norm);
  c.d_h = j.value("d_h", c.d_h);
  c.feed_prev_char = j.value("feed_prev_char", c.feed_prev_char);
  c.literal_seq_loss = j.value("literal_seq_loss", c.literal_seq_loss);
  return c;
}

MudeModel::MudeModel(const ModelConfig& config, int64_t char_vocab, int64_t word_vocab,
                     uint64_t seed)
    : config_(config), char_vocab_(char_vocab), word_vocab_(word_vocab) {
  Rng rng(seed);
  enc_ = EncoderParams::init(config.encoder, char_vocab, rng);
  dec_ = DecoderParams::init(config.encoder.d_c, char_vocab, rng);
  dec_.feed_prev_char = config.feed_prev_char;
  dec_.literal_loss = config.literal_seq_loss;
  ctx_ = ContextParams::init(config.d_h, config.encoder.d_c, word_vocab, rng);
}

MudeModel::FlatWords MudeModel::flatten(const SentenceBatch& batch) {
  FlatWords f;
  const int64_t w_count = batch.real_words();
  f.char_ids.reserve(static_cast<size_t>(w_count * batch.max_chars));
  f.char_mask.reserve(f.char_ids.capacity());
  f.dec_targets.reserve(static_cast<size_t>(w_count * batch.max_dec));
  f.dec_mask.reserve(f.dec_targets.capacity());
  for (int64_t row : batch.word_rows) {
    for (int64_t k = 0; k < batch.max_chars; ++k) {
      f.char_ids.push_back(batch.char_ids[static_cast<size_t>(row * batch.max_chars + k)]);
      f.char_mask.push_back(batch.char_mask[static_cast<size_t>(row * batch.max_chars + k)]);
    }
    for (int64_t k = 0; k < batch.max_dec; ++k) {
      f.dec_targets.push_back(batch.dec_targets[static_cast<size_t>(row * batch.max_dec + k)]);
      f.dec_mask.push_back(batch.dec_mask[static_cast<size_t>(row * batch.max_dec + k)]);
    }
  }
  return f;
}

Losses MudeModel::losses(Tape& tape, const SentenceBatch& batch) {
  const int64_t w_count = batch.real_words();
  if (w_count == 0) throw DataError("losses: batch holds no words");
  FlatWords flat = flatten(batch);
  EncoderOut enc = encode_words(tape, enc_, flat.char_ids, flat.char_mask, w_count,
                                batch.max_chars);

  Losses out;
  out.seq = decoder_loss(tape, dec_, enc.word_vecs, flat.dec_targets, flat.dec_mask, w_count,
                         batch.max_dec, &enc_.embedding);
  out.has_seq = true;

  const int64_t slots = batch.size * batch.max_words;
  Tensor grid = scatter_rows(tape, enc.word_vecs, batch.word_rows, slots)
                    .reshaped({batch.size, batch.max_words, config_.encoder.d_c});
  Tensor ctx = bilstm(tape, ctx_, grid, batch.word_mask);
  Tensor probs = predict_words(tape, ctx, ctx_.ww);
  out.pred = prediction_loss(tape, probs, batch.word_targets, batch.word_mask);
  return out;
}

std::vector<int32_t> MudeModel::predict(const SentenceBatch& batch) const {
  Tape tape;
  tape.set_recording(false);
  auto& self = const_cast<MudeModel&>(*this);
  FlatWords flat = flatten(batch);
  const int64_t w_count = batch.real_words();
  EncoderOut enc = encode_words(tape, self.enc_, flat.char_ids, flat.char_mask, w_count,
                                batch.max_chars);
  const int64_t slots = batch.size * batch.max_words;
  Tensor grid = scatter_rows(tape, enc.word_vecs, batch.word_rows, slots)
                    .reshaped({batch.size, batch.max_words, config_.encoder.d_c});
  Tensor ctx = bilstm(tape, self.ctx_, grid, batch.word_mask);
  Tensor probs = predict_words(tape, ctx, self.ctx_.ww);
  std::vector<int64_t> ids = argmax_rows(probs);
  return std::vector<int32_t>(ids.begin(), ids.end());
}

void MudeModel::collect_params(ParamSet& out) {
  enc_.collect("encoder.", out);
  dec_.collect("decoder.", out);
  ctx_.collect("context.", out);
}

std::vector<double> bag_encode(const std::string& word, const CharVocab& vocab) {
  if (word.empty()) throw DataError("bag_encode: empty word");
  const std::u32string chars = utf8_decode(word);
  const auto c = static_cast<size_t>(vocab.size());
  std::vector<double> bag(3 * c, 0.0);
  const size_t m = chars.size();
  bag[static_cast<size_t>(vocab.id(chars.front()))] += 1.0;
  bag[c + static_cast<size_t>(vocab.id(chars.back()))] += 1.0;
  for (size_t i = 1; i + 1 < m; ++i) bag[2 * c + static_cast<size_t>(vocab.id(chars[i]))] += 1.0;
  return bag;
}

Tensor scrnn_forward(Tape& tape, const Tensor& bags, const Tensor& projection,
                     const ContextParams& ctx) {
  if (bags.ndim() != 2 || bags.dim(1) != projection.dim(1))
    throw ShapeError("scrnn_forward: bag width does not match projection");
  const int64_t n = bags.dim(0);
  Tensor word_vecs = matmul(tape, bags, transpose(tape, projection));
  Tensor grid = word_vecs.reshaped({int64_t{1}, n, projection.dim(0)});
  std::vector<double> mask(static_cast<size_t>(n), 1.0);
  Tensor refined = bilstm(tape, ctx, grid, mask);
  return predict_words(tape, refined, ctx.ww).reshaped({n, ctx.ww.dim(0)});
}

ScrnnModel::ScrnnModel(const ModelConfig& config, int64_t char_vocab, int64_t word_vocab,
                       uint64_t seed)
    : config_(config), char_vocab_(char_vocab), word_vocab_(word_vocab) {
  Rng rng(seed);
  proj_ = init_param({config.encoder.d_c, 3 * char_vocab}, rng);
  ctx_ = ContextParams::init(config.d_h, config.encoder.d_c, word_vocab, rng);
}

Tensor ScrnnModel::bag_tensor(const SentenceBatch& batch) const {
  const int64_t w_count = batch.real_words();
  const int64_t c = char_vocab_;
  Tensor bags({w_count, 3 * c});
  double* bp = bags.data();
  for (int64_t w = 0; w < w_count; ++w) {
    const int64_t row = batch.word_rows[static_cast<size_t>(w)];
    // Row layout is [AGG, c_1, ..., c_m, PAD...]; recover m from the mask.
    int64_t m = 0;
    for (int64_t k = 1; k < batch.max_chars; ++k)
      if (batch.char_mask[static_cast<size_t>(row * batch.max_chars + k)] > 0.0) m = k;
    double* bag = bp + w * 3 * c;
    const auto id_at = [&](int64_t k) {
      return batch.char_ids[static_cast<size_t>(row * batch.max_chars + k)];
    };
    bag[id_at(1)] += 1.0;
    bag[c + id_at(m)] += 1.0;
    for (int64_t k = 2; k < m; ++k) bag[2 * c + id_at(k)] += 1.0;
  }
  return bags;
}

Losses ScrnnModel::losses(Tape& tape, const SentenceBatch& batch) {
  const int64_t w_count = batch.real_words();
  if (w_count == 0) throw DataError("losses: batch holds no words");
  Tensor bags = bag_tensor(batch);
  Tensor word_vecs = matmul(tape, bags, transpose(tape, proj_));
  const int64_t slots = batch.size * batch.max_words;
  Tensor grid = scatter_rows(tape, word_vecs, batch.word_rows, slots)
                    .reshaped({batch.size, batch.max_words, config_.encoder.d_c});
  Tensor ctx = bilstm(tape, ctx_, grid, batch.word_mask);
  Tensor probs = predict_words(tape, ctx, ctx_.ww);
  Losses out;
  out.pred = prediction_loss(tape, probs, batch.word_targets, batch.word_mask);
  out.has_seq = false;
  return out;
}

std::vector<int32_t> ScrnnModel::predict(const SentenceBatch& batch) const {
  Tape tape;
  tape.set_recording(false);
  auto& self = const_cast<ScrnnModel&>(*this);
  Tensor bags = bag_tensor(batch);
  Tensor word_vecs = matmul(tape, bags, transpose(tape, self.proj_));
  const int64_t slots = batch.size * batch.max_words;
  Tensor grid = scatter_rows(tape, word_vecs, batch.word_rows, slots)
                    .reshaped({batch.size, batch.max_words, config_.encoder.d_c});
  Tensor ctx = bilstm(tape, self.ctx_, grid, batch.word_mask);
  Tensor probs = predict_words(tape, ctx, self.ctx_.ww);
  std::vector<int64_t> ids = argmax_rows(probs);
  return std::vector<int32_t>(ids.begin(), ids.end());
}

void ScrnnModel::collect_params(ParamSet& out) {
  out.add("baseline.proj", proj_);
  ctx_.collect("baseline.context.", out);
}

std::unique_ptr<WordModel> make_model(const std::string& kind, const ModelConfig& config,
                                      int64_t char_vocab, int64_t word_vocab, uint64_t seed) {
  if (kind == "mude") return std::make_unique<MudeModel>(config, char_vocab, word_vocab, seed);
  if (kind == "scrnn") return std::make_unique<ScrnnModel>(config, char_vocab, word_vocab, seed);
  throw ConfigError("unknown model kind: " + kind);
}

}  // namespace mude
