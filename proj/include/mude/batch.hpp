// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mude/corpus.hpp"
#include "mude/vocab.hpp"

namespace mude {

// One padded batch of sentences. Grids are row-major:
//   char_ids / char_mask    [batch x max_words x max_chars]
//   word_targets / word_mask [batch x max_words]
//   dec_targets / dec_mask  [batch x max_words x max_dec]
// Encoder rows come from the noised words and start with AGG; decoder
// targets come from the clean words and end with EOW (their width is the
// longest clean word + 1, which can exceed max_chars for DEL noise). Masked
// positions hold PAD.
struct SentenceBatch {
  int64_t size = 0;       // sentences in this batch
  int64_t max_words = 0;  // N_max
  int64_t max_chars = 0;  // M_max + 1 (AGG included)
  int64_t max_dec = 0;    // longest clean word + 1 (EOW included)

  std::vector<int32_t> char_ids;
  std::vector<double> char_mask;
  std::vector<int32_t> word_targets;
  std::vector<double> word_mask;
  std::vector<int32_t> dec_targets;
  std::vector<double> dec_mask;

  // Flattened row index (b * max_words + n) of every real word, in order.
  std::vector<int64_t> word_rows;
  // Original corpus index of each sentence in the batch.
  std::vector<int64_t> sentence_ids;

  int64_t real_words() const { return static_cast<int64_t>(word_rows.size()); }
};

// Splits an aligned corpus pair into padded batches. When shuffle is set the
// sentence order is permuted deterministically under the seed; padding is
// per batch (longest sentence/word in that batch).
std::vector<SentenceBatch> make_batches(const CorpusPair& pair, const Vocabs& vocabs,
                                        int64_t batch_size, uint64_t seed, bool shuffle = true);

}  // namespace mude
