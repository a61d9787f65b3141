// SPDX-License-Identifier: Apache-2.0
#include "mude/evaluator.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "mude/batch.hpp"

namespace mude {

namespace {

constexpr int64_t kEvalBatch = 64;

std::string fmt_pct(double v) {
  std::ostringstream os;
  if (std::isnan(v)) {
    os << "--";
  } else {
    os << std::fixed << std::setprecision(2) << v;
  }
  return os.str();
}

}  // namespace

double word_accuracy(const std::vector<int32_t>& predicted, const std::vector<int32_t>& gold,
                     const std::vector<double>& mask) {
  if (predicted.size() != gold.size() || mask.size() != gold.size())
    throw ShapeError("word_accuracy: sequences must be aligned");
  int64_t total = 0, correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (mask[i] <= 0.0) continue;
    ++total;
    if (predicted[i] == gold[i]) ++correct;
  }
  if (total == 0) throw DataError("word_accuracy: no unmasked positions");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json errors = nlohmann::json::array();
  for (size_t s = 0; s < error_positions.size(); ++s) {
    if (error_positions[s].empty()) continue;
    errors.push_back({{"sentence", s}, {"positions", error_positions[s]}});
  }
  return {{"noise", noise_kind},
          {"total_words", total_words},
          {"correct_words", correct_words},
          {"accuracy", accuracy},
          {"errors", errors}};
}

std::string EvalReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(10) << "noise" << std::right << std::setw(10) << "words"
     << std::setw(10) << "correct" << std::setw(12) << "accuracy\n";
  os << std::left << std::setw(10) << noise_kind << std::right << std::setw(10) << total_words
     << std::setw(10) << correct_words << std::setw(11) << fmt_pct(accuracy) << "\n";
  return os.str();
}

EvalReport evaluate(const WordModel& model, const Vocabs& vocabs, const CorpusPair& test,
                    const EvalOptions& options) {
  if (model.char_vocab_size() != vocabs.chars.size() ||
      model.word_vocab_size() != vocabs.words.size())
    throw ConfigError("evaluate: checkpoint vocabulary does not match the corpus encoding");

  EvalReport report;
  report.noise_kind = test.noise_kind;
  report.error_positions.assign(test.clean.size(), {});

  const auto batches = make_batches(test, vocabs, kEvalBatch, 0, /*shuffle=*/false);
  for (const SentenceBatch& batch : batches) {
    const std::vector<int32_t> preds = model.predict(batch);
    for (int64_t i = 0; i < batch.size; ++i) {
      const auto sid = static_cast<size_t>(batch.sentence_ids[static_cast<size_t>(i)]);
      const auto& clean_words = test.clean.sentence(sid);
      const auto& noised_words = test.noised.sentence(sid);
      for (size_t w = 0; w < clean_words.size(); ++w) {
        if (options.noised_only && noised_words[w] == clean_words[w]) continue;
        const auto row = static_cast<size_t>(i * batch.max_words + static_cast<int64_t>(w));
        const int32_t gold = batch.word_targets[row];
        bool ok;
        if (gold == WordVocab::kUnk && !vocabs.words.contains(clean_words[w])) {
          // Gold word outside the vocabulary: conservatively wrong unless
          // UNK==UNK counting is requested.
          ok = options.count_unk_as_correct && preds[row] == WordVocab::kUnk;
        } else {
          ok = preds[row] == gold;
        }
        ++report.total_words;
        if (ok) {
          ++report.correct_words;
        } else {
          report.error_positions[sid].push_back(static_cast<int64_t>(w));
        }
      }
    }
  }
  if (report.total_words == 0) throw DataError("evaluate: no countable words");
  report.accuracy =
      100.0 * static_cast<double>(report.correct_words) / static_cast<double>(report.total_words);
  return report;
}

nlohmann::json GeneralizationMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t r = 0; r < kinds.size(); ++r) {
    nlohmann::json row;
    row["train"] = kinds[r];
    for (size_t c = 0; c < kinds.size(); ++c)
      row[kinds[c]] = std::isnan(cells[r][c]) ? nlohmann::json(nullptr)
                                              : nlohmann::json(cells[r][c]);
    row["mean"] = row_means[r];
    rows.push_back(row);
  }
  return {{"kinds", kinds}, {"rows", rows}};
}

std::string GeneralizationMatrix::table() const {
  std::ostringstream os;
  os << std::left << std::setw(8) << "train";
  for (const auto& k : kinds) os << std::right << std::setw(8) << k;
  os << std::right << std::setw(8) << "MEAN" << "\n";
  for (size_t r = 0; r < kinds.size(); ++r) {
    os << std::left << std::setw(8) << kinds[r];
    for (size_t c = 0; c < kinds.size(); ++c) {
      std::string cell = fmt_pct(cells[r][c]);
      if (r == c && !std::isnan(cells[r][c])) cell += "*";  // diagonal marker
      os << std::right << std::setw(8) << cell;
    }
    os << std::right << std::setw(8) << fmt_pct(row_means[r]) << "\n";
  }
  return os.str();
}

GeneralizationMatrix cross_noise_matrix(
    const std::function<const WordModel*(const std::string&)>& model_for_kind,
    const std::function<const CorpusPair&(const std::string&)>& corpus_for_kind,
    const Vocabs& vocabs, const EvalOptions& options) {
  GeneralizationMatrix matrix;
  for (NoiseKind k : all_noise_kinds()) matrix.kinds.push_back(noise_kind_name(k));
  const size_t n = matrix.kinds.size();
  matrix.cells.assign(n, std::vector<double>(n, std::nan("")));
  matrix.row_means.assign(n, 0.0);
  for (size_t r = 0; r < n; ++r) {
    const WordModel* model = model_for_kind(matrix.kinds[r]);
    if (!model) throw ConfigError("cross_noise_matrix: missing model for " + matrix.kinds[r]);
    double sum = 0.0;
    int64_t present = 0;
    for (size_t c = 0; c < n; ++c) {
      const CorpusPair& corpus = corpus_for_kind(matrix.kinds[c]);
      matrix.cells[r][c] = evaluate(*model, vocabs, corpus, options).accuracy;
      sum += matrix.cells[r][c];
      ++present;
    }
    matrix.row_means[r] = present ? sum / static_cast<double>(present) : std::nan("");
  }
  return matrix;
}

std::string correct_sentence(const WordModel& model, const Vocabs& vocabs,
                             const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ls >> tok) tokens.push_back(tok);
  if (tokens.empty()) return "";

  // Inference needs only the noised side; reuse the batch builder with the
  // input standing in for both halves (targets are ignored).
  CorpusPair pair;
  pair.noised = Corpus({tokens}, "input");
  pair.clean = pair.noised;
  const auto batches = make_batches(pair, vocabs, 1, 0, /*shuffle=*/false);
  const std::vector<int32_t> preds = model.predict(batches[0]);

  std::ostringstream out;
  for (size_t w = 0; w < tokens.size(); ++w) {
    if (w) out << ' ';
    const int32_t id = preds[w];
    out << (id < WordVocab::kReserved ? std::string("<unk>") : vocabs.words.at(id));
  }
  return out.str();
}

}  // namespace mude
