// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "mude/corpus.hpp"
#include "mude/rng.hpp"

namespace mude {

// Synthetic misspelling kinds. The internal variants (PER/DEL/INS/SUB)
// never touch a word's first or last character; the W-* variants act on any
// position. W_ALL mixes the four W-* kinds per sentence and is only valid
// for corpus construction.
enum class NoiseKind { PER, DEL, INS, SUB, W_PER, W_DEL, W_INS, W_SUB, W_ALL };

// CLI-facing slugs: per, del, ins, sub, w-per, w-del, w-ins, w-sub, w-all.
std::string noise_kind_name(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

// The eight single kinds in report order (no W_ALL).
const std::vector<NoiseKind>& all_noise_kinds();

struct NoiseConfig {
  uint64_t seed = 0;
  // Characters drawn for insertion/substitution.
  std::u32string alphabet = U"abcdefghijklmnopqrstuvwxyz";
  // Words shorter than this are never altered (default: only words with
  // more than 3 characters are).
  int64_t min_len = 4;
};

// Applies one noise kind to a single word. Words shorter than min_len are
// returned unchanged. kind must not be W_ALL.
std::string noise_word(const std::string& word, NoiseKind kind, Rng& rng,
                       const NoiseConfig& config = {});

// Static corpus noising: every word is noised exactly once. Each sentence
// draws from its own (seed, sentence index) stream, so the result does not
// depend on traversal order. For W_ALL each sentence is uniformly assigned
// one of the four W-* kinds.
CorpusPair noise_corpus(const Corpus& corpus, NoiseKind kind, const NoiseConfig& config);

// Structural oracle: true iff (noised, clean) is consistent with the kind's
// invariants (length delta, endpoint preservation, multiset / subsequence /
// Hamming relations). kind must not be W_ALL.
bool verify_noise(const std::string& noised, const std::string& clean, NoiseKind kind,
                  const NoiseConfig& config = {});

}  // namespace mude
