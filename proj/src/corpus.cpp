// SPDX-License-Identifier: Apache-2.0
#include "mude/corpus.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mude/unicode.hpp"

namespace mude {

Corpus::Corpus(std::vector<std::vector<std::string>> sentences, std::string split)
    : sentences_(std::move(sentences)), split_(std::move(split)) {
  for (const auto& s : sentences_) {
    if (s.empty()) throw DataError("Corpus: empty sentence");
    for (const auto& w : s)
      if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos)
        throw DataError("Corpus: token contains whitespace or is empty");
  }
}

int64_t Corpus::token_count() const {
  int64_t n = 0;
  for (const auto& s : sentences_) n += static_cast<int64_t>(s.size());
  return n;
}

Corpus Corpus::head(size_t n) const { return slice(0, std::min(n, sentences_.size())); }

Corpus Corpus::slice(size_t begin, size_t end) const {
  if (begin > end || end > sentences_.size()) throw DataError("Corpus::slice: bad range");
  return Corpus(std::vector<std::vector<std::string>>(sentences_.begin() + static_cast<long>(begin),
                                                      sentences_.begin() + static_cast<long>(end)),
                split_);
}

Corpus load_corpus(const std::string& path, const std::string& split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    utf8_decode(line);  // validates encoding
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return Corpus(std::move(sentences), split);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const auto& sentence : corpus.sentences()) {
    for (size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
}

CorpusPair load_pair(const std::string& prefix) {
  CorpusPair pair;
  pair.noised = load_corpus(prefix + ".noised.txt");
  pair.clean = load_corpus(prefix + ".clean.txt");
  if (pair.noised.size() != pair.clean.size())
    throw DataError("corpus pair misaligned: sentence counts differ");
  for (size_t i = 0; i < pair.clean.size(); ++i)
    if (pair.noised.sentence(i).size() != pair.clean.sentence(i).size())
      throw DataError("corpus pair misaligned at sentence " + std::to_string(i));
  std::ifstream meta(prefix + ".meta.json");
  if (meta) {
    nlohmann::json j = nlohmann::json::parse(meta);
    pair.noise_kind = j.value("noise", "");
    pair.seed = j.value("seed", uint64_t{0});
  }
  return pair;
}

void save_pair(const CorpusPair& pair, const std::string& prefix) {
  save_corpus(pair.noised, prefix + ".noised.txt");
  save_corpus(pair.clean, prefix + ".clean.txt");
  nlohmann::json j;
  j["noise"] = pair.noise_kind;
  j["seed"] = pair.seed;
  j["sentences"] = pair.clean.size();
  std::ofstream meta(prefix + ".meta.json", std::ios::binary);
  if (!meta) throw DataError("cannot write meta sidecar: " + prefix + ".meta.json");
  meta << j.dump(2) << '\n';
}

}  // namespace mude
