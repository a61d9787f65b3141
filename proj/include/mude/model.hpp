// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "mude/batch.hpp"
#include "mude/context.hpp"
#include "mude/decoder.hpp"
#include "mude/encoder.hpp"

namespace mude {

struct ModelConfig {
  EncoderConfig encoder;
  int64_t d_h = 128;  // per-direction LSTM width (650 reproduces the paper scale)
  bool feed_prev_char = false;
  bool literal_seq_loss = false;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

struct Losses {
  Tensor pred;
  Tensor seq;  // undefined when the model has no character decoder
  bool has_seq = false;
};

// Common surface for the two word recognizers. Training uses losses();
// evaluation uses predict(), which never touches decoder parameters.
class WordModel {
 public:
  virtual ~WordModel() = default;
  virtual std::string kind() const = 0;
  virtual const ModelConfig& config() const = 0;
  virtual int64_t char_vocab_size() const = 0;
  virtual int64_t word_vocab_size() const = 0;
  virtual Losses losses(Tape& tape, const SentenceBatch& batch) = 0;
  virtual std::vector<int32_t> predict(const SentenceBatch& batch) const = 0;
  virtual void collect_params(ParamSet& out) = 0;
};

class MudeModel : public WordModel {
 public:
  MudeModel(const ModelConfig& config, int64_t char_vocab, int64_t word_vocab, uint64_t seed);

  std::string kind() const override { return "mude"; }
  const ModelConfig& config() const override { return config_; }
  int64_t char_vocab_size() const override { return char_vocab_; }
  int64_t word_vocab_size() const override { return word_vocab_; }
  Losses losses(Tape& tape, const SentenceBatch& batch) override;
  std::vector<int32_t> predict(const SentenceBatch& batch) const override;
  void collect_params(ParamSet& out) override;

  EncoderParams& encoder() { return enc_; }
  DecoderParams& decoder() { return dec_; }
  ContextParams& context() { return ctx_; }

 private:
  // Encoder inputs flattened to the real words of a batch.
  struct FlatWords {
    std::vector<int32_t> char_ids;
    std::vector<double> char_mask;
    std::vector<int32_t> dec_targets;
    std::vector<double> dec_mask;
  };
  static FlatWords flatten(const SentenceBatch& batch);

  ModelConfig config_;
  int64_t char_vocab_, word_vocab_;
  EncoderParams enc_;
  DecoderParams dec_;
  ContextParams ctx_;
};

// Bag-of-characters vector: one-hot first character, one-hot last character,
// counts of the internal characters; length 3 * |CharVocab|.
std::vector<double> bag_encode(const std::string& word, const CharVocab& vocab);

// Single-sentence baseline forward: bags [n x 3C] -> projection -> shared
// bidirectional context -> word distributions [n x V].
Tensor scrnn_forward(Tape& tape, const Tensor& bags, const Tensor& projection,
                     const ContextParams& ctx);

class ScrnnModel : public WordModel {
 public:
  ScrnnModel(const ModelConfig& config, int64_t char_vocab, int64_t word_vocab, uint64_t seed);

  std::string kind() const override { return "scrnn"; }
  const ModelConfig& config() const override { return config_; }
  int64_t char_vocab_size() const override { return char_vocab_; }
  int64_t word_vocab_size() const override { return word_vocab_; }
  Losses losses(Tape& tape, const SentenceBatch& batch) override;
  std::vector<int32_t> predict(const SentenceBatch& batch) const override;
  void collect_params(ParamSet& out) override;

  Tensor& projection() { return proj_; }
  ContextParams& context() { return ctx_; }

 private:
  Tensor bag_tensor(const SentenceBatch& batch) const;  // [W x 3C]

  ModelConfig config_;
  int64_t char_vocab_, word_vocab_;
  Tensor proj_;  // [d_c x 3C]
  ContextParams ctx_;
};

std::unique_ptr<WordModel> make_model(const std::string& kind, const ModelConfig& config,
                                      int64_t char_vocab, int64_t word_vocab, uint64_t seed);

}  // namespace mude
