// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mude/common.hpp"

namespace mude {

class Corpus;

// Character inventory with four reserved ids. AGG is the aggregation marker
// prepended to every word before encoding; its final encoder state becomes
// the word representation. EOW terminates decoder targets.
class CharVocab {
 public:
  static constexpr int32_t kPad = 0;
  static constexpr int32_t kAgg = 1;
  static constexpr int32_t kEow = 2;
  static constexpr int32_t kUnk = 3;
  static constexpr int32_t kReserved = 4;

  CharVocab() = default;
  explicit CharVocab(std::vector<char32_t> chars);  // non-reserved entries, in id order

  int32_t id(char32_t c) const;  // kUnk for unseen characters
  bool contains(char32_t c) const { return to_id_.count(c) > 0; }
  char32_t at(int32_t id) const;
  int64_t size() const { return kReserved + static_cast<int64_t>(chars_.size()); }
  const std::vector<char32_t>& chars() const { return chars_; }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, int32_t> to_id_;
};

// Word inventory built from the clean training split only.
class WordVocab {
 public:
  static constexpr int32_t kPad = 0;
  static constexpr int32_t kUnk = 1;
  static constexpr int32_t kReserved = 2;

  WordVocab() = default;
  explicit WordVocab(std::vector<std::string> words);  // non-reserved entries, in id order

  int32_t id(const std::string& w) const;  // kUnk for out-of-vocabulary words
  bool contains(const std::string& w) const { return to_id_.count(w) > 0; }
  const std::string& at(int32_t id) const;
  int64_t size() const { return kReserved + static_cast<int64_t>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int32_t> to_id_;
};

struct Vocabs {
  CharVocab chars;
  WordVocab words;
};

// Builds both vocabularies from the training split. Ids are assigned by
// descending frequency, ties broken lexicographically, so construction is
// deterministic.
Vocabs build_vocabs(const Corpus& train_corpus);

struct EncodedWord {
  std::vector<int32_t> encoder_ids;  // [AGG, c_1, ..., c_m]
  std::vector<int32_t> decoder_ids;  // [c_1, ..., c_m, EOW]
};

// Encodes one word. The encoder side maps unseen characters to UNK-CHAR;
// the decoder side is meant to be built from the clean word.
EncodedWord encode_word(const std::string& word, const CharVocab& vocab);

}  // namespace mude
