// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "mude/model.hpp"
#include "mude/noise.hpp"

namespace mude {

struct EvalOptions {
  // Count only tokens the noise actually altered.
  bool noised_only = false;
  // Count a gold OOV position as correct when the model predicts UNK;
  // default is the conservative rule (gold OOV is always wrong).
  bool count_unk_as_correct = false;
};

// 100 * correct / total over unmasked positions.
double word_accuracy(const std::vector<int32_t>& predicted, const std::vector<int32_t>& gold,
                     const std::vector<double>& mask);

struct EvalReport {
  std::string noise_kind;
  int64_t total_words = 0;
  int64_t correct_words = 0;
  double accuracy = 0.0;  // percent
  // Word positions the model got wrong, per sentence (corpus order).
  std::vector<std::vector<int64_t>> error_positions;

  nlohmann::json to_json() const;
  std::string table() const;
};

// Word accuracy of the inference path (encoder -> context -> argmax) over an
// aligned test pair. Decoder parameters are never read.
EvalReport evaluate(const WordModel& model, const Vocabs& vocabs, const CorpusPair& test,
                    const EvalOptions& options = {});

struct GeneralizationMatrix {
  std::vector<std::string> kinds;          // row/column labels, canonical order
  std::vector<std::vector<double>> cells;  // [train][test] accuracy, NaN = absent
  std::vector<double> row_means;           // mean over present cells

  nlohmann::json to_json() const;
  std::string table() const;
};

// Table of train-noise x test-noise accuracies. Models are produced lazily
// per train kind so callers can load checkpoints on demand.
GeneralizationMatrix cross_noise_matrix(
    const std::function<const WordModel*(const std::string&)>& model_for_kind,
    const std::function<const CorpusPair&(const std::string&)>& corpus_for_kind,
    const Vocabs& vocabs, const EvalOptions& options = {});

// Maps one raw whitespace-tokenized line to its corrected form. Reserved-id
// predictions are emitted as the literal token <unk>.
std::string correct_sentence(const WordModel& model, const Vocabs& vocabs,
                             const std::string& line);

}  // namespace mude
