// SPDX-License-Identifier: Apache-2.0
#include "mude/vocab.hpp"

#include <algorithm>
#include <map>

#include "mude/corpus.hpp"
#include "mude/unicode.hpp"

namespace mude {

CharVocab::CharVocab(std::vector<char32_t> chars) : chars_(std::move(chars)) {
  for (size_t i = 0; i < chars_.size(); ++i) {
    auto [it, fresh] = to_id_.emplace(chars_[i], kReserved + static_cast<int32_t>(i));
    if (!fresh) throw DataError("CharVocab: duplicate character entry");
  }
}

int32_t CharVocab::id(char32_t c) const {
  auto it = to_id_.find(c);
  return it == to_id_.end() ? kUnk : it->second;
}

char32_t CharVocab::at(int32_t id) const {
  if (id < kReserved || id >= size()) throw DataError("CharVocab: id out of range");
  return chars_[static_cast<size_t>(id - kReserved)];
}

WordVocab::WordVocab(std::vector<std::string> words) : words_(std::move(words)) {
  for (size_t i = 0; i < words_.size(); ++i) {
    auto [it, fresh] = to_id_.emplace(words_[i], kReserved + static_cast<int32_t>(i));
    if (!fresh) throw DataError("WordVocab: duplicate word entry");
  }
}

int32_t WordVocab::id(const std::string& w) const {
  auto it = to_id_.find(w);
  return it == to_id_.end() ? kUnk : it->second;
}

const std::string& WordVocab::at(int32_t id) const {
  if (id < kReserved || id >= size()) throw DataError("WordVocab: id out of range");
  return words_[static_cast<size_t>(id - kReserved)];
}

namespace {

// Orders entries by descending count, ties lexicographically.
template <typename K>
std::vector<K> rank_by_frequency(const std::map<K, int64_t>& counts) {
  std::vector<std::pair<K, int64_t>> entries(counts.begin(), counts.end());
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<K> keys;
  keys.reserve(entries.size());
  for (auto& e : entries) keys.push_back(e.first);
  return keys;
}

}  // namespace

Vocabs build_vocabs(const Corpus& train_corpus) {
  if (train_corpus.empty()) throw DataError("build_vocabs: empty training corpus");
  std::map<char32_t, int64_t> char_counts;
  std::map<std::string, int64_t> word_counts;
  for (const auto& sentence : train_corpus.sentences()) {
    for (const auto& word : sentence) {
      ++word_counts[word];
      for (char32_t c : utf8_decode(word)) ++char_counts[c];
    }
  }
  return {CharVocab(rank_by_frequency(char_counts)), WordVocab(rank_by_frequency(word_counts))};
}

EncodedWord encode_word(const std::string& word, const CharVocab& vocab) {
  if (word.empty()) throw DataError("encode_word: empty word");
  const std::u32string chars = utf8_decode(word);
  EncodedWord out;
  out.encoder_ids.reserve(chars.size() + 1);
  out.decoder_ids.reserve(chars.size() + 1);
  out.encoder_ids.push_back(CharVocab::kAgg);
  for (char32_t c : chars) {
    const int32_t id = vocab.id(c);
    out.encoder_ids.push_back(id);
    out.decoder_ids.push_back(id);
  }
  out.decoder_ids.push_back(CharVocab::kEow);
  return out;
}

}  // namespace mude
