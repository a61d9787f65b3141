// SPDX-License-Identifier: Apache-2.0
#include "mude/batch.hpp"

#include <algorithm>
#include <numeric>

#include "mude/rng.hpp"

namespace mude {

std::vector<SentenceBatch> make_batches(const CorpusPair& pair, const Vocabs& vocabs,
                                        int64_t batch_size, uint64_t seed, bool shuffle) {
  if (batch_size <= 0) throw ConfigError("make_batches: batch_size must be > 0");
  if (pair.noised.size() != pair.clean.size())
    throw DataError("make_batches: corpus pair misaligned");
  const size_t n_sentences = pair.clean.size();

  std::vector<int64_t> order(n_sentences);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    Rng rng(seed);
    rng.shuffle(order);
  }

  std::vector<SentenceBatch> batches;
  for (size_t start = 0; start < n_sentences; start += static_cast<size_t>(batch_size)) {
    const size_t end = std::min(n_sentences, start + static_cast<size_t>(batch_size));
    SentenceBatch b;
    b.size = static_cast<int64_t>(end - start);
    b.sentence_ids.assign(order.begin() + static_cast<long>(start),
                          order.begin() + static_cast<long>(end));

    // Encode every word up front; padding extents come from this batch only.
    std::vector<std::vector<EncodedWord>> enc_noised(static_cast<size_t>(b.size));
    std::vector<std::vector<EncodedWord>> enc_clean(static_cast<size_t>(b.size));
    for (int64_t i = 0; i < b.size; ++i) {
      const auto si = static_cast<size_t>(b.sentence_ids[static_cast<size_t>(i)]);
      const auto& noised = pair.noised.sentence(si);
      const auto& clean = pair.clean.sentence(si);
      if (noised.size() != clean.size())
        throw DataError("make_batches: word counts differ at sentence " + std::to_string(si));
      b.max_words = std::max(b.max_words, static_cast<int64_t>(noised.size()));
      for (size_t w = 0; w < noised.size(); ++w) {
        enc_noised[static_cast<size_t>(i)].push_back(encode_word(noised[w], vocabs.chars));
        enc_clean[static_cast<size_t>(i)].push_back(encode_word(clean[w], vocabs.chars));
        b.max_chars = std::max(
            b.max_chars,
            static_cast<int64_t>(enc_noised[static_cast<size_t>(i)].back().encoder_ids.size()));
        b.max_dec = std::max(
            b.max_dec,
            static_cast<int64_t>(enc_clean[static_cast<size_t>(i)].back().decoder_ids.size()));
      }
    }

    b.char_ids.assign(static_cast<size_t>(b.size * b.max_words * b.max_chars), CharVocab::kPad);
    b.char_mask.assign(b.char_ids.size(), 0.0);
    b.word_targets.assign(static_cast<size_t>(b.size * b.max_words), WordVocab::kPad);
    b.word_mask.assign(b.word_targets.size(), 0.0);
    b.dec_targets.assign(static_cast<size_t>(b.size * b.max_words * b.max_dec), CharVocab::kPad);
    b.dec_mask.assign(b.dec_targets.size(), 0.0);

    for (int64_t i = 0; i < b.size; ++i) {
      const auto si = static_cast<size_t>(b.sentence_ids[static_cast<size_t>(i)]);
      const auto& clean_words = pair.clean.sentence(si);
      for (size_t w = 0; w < clean_words.size(); ++w) {
        const int64_t row = i * b.max_words + static_cast<int64_t>(w);
        b.word_rows.push_back(row);
        b.word_targets[static_cast<size_t>(row)] = vocabs.words.id(clean_words[w]);
        b.word_mask[static_cast<size_t>(row)] = 1.0;
        const auto& enc = enc_noised[static_cast<size_t>(i)][w].encoder_ids;
        for (size_t k = 0; k < enc.size(); ++k) {
          b.char_ids[static_cast<size_t>(row * b.max_chars) + k] = enc[k];
          b.char_mask[static_cast<size_t>(row * b.max_chars) + k] = 1.0;
        }
        const auto& dec = enc_clean[static_cast<size_t>(i)][w].decoder_ids;
        for (size_t k = 0; k < dec.size(); ++k) {
          b.dec_targets[static_cast<size_t>(row * b.max_dec) + k] = dec[k];
          b.dec_mask[static_cast<size_t>(row * b.max_dec) + k] = 1.0;
        }
      }
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace mude
