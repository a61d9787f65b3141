// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mude/common.hpp"

namespace mude {

// A whitespace-pre-tokenized corpus: one sentence per line, tokens kept
// verbatim (case and punctuation untouched). Empty lines are skipped.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<std::vector<std::string>> sentences, std::string split);

  const std::vector<std::vector<std::string>>& sentences() const { return sentences_; }
  const std::vector<std::string>& sentence(size_t i) const { return sentences_[i]; }
  size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const std::string& split() const { return split_; }

  int64_t token_count() const;

  // First n sentences (or all, when fewer).
  Corpus head(size_t n) const;
  Corpus slice(size_t begin, size_t end) const;

 private:
  std::vector<std::vector<std::string>> sentences_;
  std::string split_;
};

Corpus load_corpus(const std::string& path, const std::string& split = "");

void save_corpus(const Corpus& corpus, const std::string& path);

// Aligned (noised, clean) sentence pairs plus the provenance recorded when
// the pair was produced.
struct CorpusPair {
  Corpus noised;
  Corpus clean;
  std::string noise_kind;
  uint64_t seed = 0;
};

// Reads `<prefix>.noised.txt`, `<prefix>.clean.txt` and the
// `<prefix>.meta.json` sidecar. Verifies 1:1 alignment.
CorpusPair load_pair(const std::string& prefix);

void save_pair(const CorpusPair& pair, const std::string& prefix);

}  // namespace mude
