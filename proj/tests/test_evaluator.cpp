// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mude/checkpoint.hpp"
#include "mude/evaluator.hpp"
#include "mude/trainer.hpp"

using namespace mude;

namespace {

ModelConfig eval_model_config() {
  ModelConfig c;
  c.encoder.d_c = 16;
  c.encoder.heads = 2;
  c.encoder.layers = 1;
  c.encoder.d_ff = 32;
  c.d_h = 12;
  return c;
}

Corpus eval_corpus(int sentences, uint64_t seed) {
  const std::vector<std::string> nouns = {"river", "garden", "letter", "bridge", "candle",
                                          "window", "basket"};
  const std::vector<std::string> verbs = {"opened", "carried", "watched", "mended"};
  std::vector<std::vector<std::string>> out;
  Rng rng(seed);
  for (int i = 0; i < sentences; ++i) {
    const auto& n1 = nouns[rng.next_below(nouns.size())];
    const auto& v = verbs[rng.next_below(verbs.size())];
    const auto& n2 = nouns[rng.next_below(nouns.size())];
    out.push_back({"the", n1, v, "the", n2, "."});
  }
  return Corpus(out, "");
}

struct TempDir {
  std::string path;
  explicit TempDir(const std::string& name) : path("mude_test_ckpt_" + name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("word_accuracy arithmetic and errors") {
  CHECK(word_accuracy({1, 2, 3}, {1, 2, 3}, {1, 1, 1}) == doctest::Approx(100.0));
  CHECK(word_accuracy({1, 9}, {1, 2}, {1, 1}) == doctest::Approx(50.0));
  CHECK(word_accuracy({1, 9, 7}, {1, 2, 7}, {1, 1, 0}) == doctest::Approx(50.0));  // pad ignored
  CHECK_THROWS_AS(word_accuracy({1}, {1}, {0}), DataError);
  CHECK_THROWS_AS(word_accuracy({1}, {1, 2}, {1, 1}), ShapeError);
}

TEST_CASE("evaluate: bookkeeping, determinism, decoder isolation") {
  Corpus clean = eval_corpus(20, 31);
  NoiseConfig ncfg;
  ncfg.seed = 13;
  CorpusPair pair = noise_corpus(clean, NoiseKind::PER, ncfg);
  Vocabs v = build_vocabs(clean);
  MudeModel model(eval_model_config(), v.chars.size(), v.words.size(), 5);

  EvalReport r1 = evaluate(model, v, pair);
  CHECK(r1.total_words == clean.token_count());
  CHECK(r1.correct_words <= r1.total_words);
  CHECK(r1.accuracy >= 0.0);
  CHECK(r1.accuracy <= 100.0);
  CHECK(r1.noise_kind == "per");

  EvalReport r2 = evaluate(model, v, pair);
  CHECK(r1.accuracy == r2.accuracy);
  CHECK(r1.correct_words == r2.correct_words);

  // poisoning every decoder parameter cannot change inference results
  ParamSet params;
  model.collect_params(params);
  for (auto& it : params.items())
    if (it.name.rfind("decoder.", 0) == 0)
      std::fill(it.tensor->values().begin(), it.tensor->values().end(), std::nan(""));
  EvalReport r3 = evaluate(model, v, pair);
  CHECK(r3.accuracy == r1.accuracy);

  // vocab mismatch is a config error
  Vocabs other = build_vocabs(Corpus({{"completely", "different", "tokens"}}, ""));
  CHECK_THROWS_AS(evaluate(model, other, pair), ConfigError);

  // reports serialize
  CHECK(r1.to_json().contains("accuracy"));
  CHECK(r1.table().find("per") != std::string::npos);
}

TEST_CASE("permutation-consistent accuracy under reseeded PER noise") {
  Corpus clean = eval_corpus(16, 77);
  Vocabs v = build_vocabs(clean);
  MudeModel model(eval_model_config(), v.chars.size(), v.words.size(), 5);

  NoiseConfig a;
  a.seed = 1;
  NoiseConfig b;
  b.seed = 2;
  EvalReport ra = evaluate(model, v, noise_corpus(clean, NoiseKind::PER, a));
  EvalReport rb = evaluate(model, v, noise_corpus(clean, NoiseKind::PER, b));
  CHECK(ra.accuracy == rb.accuracy);  // encoder is exactly permutation invariant
}

TEST_CASE("generalization matrix bookkeeping") {
  Corpus clean = eval_corpus(10, 41);
  Vocabs v = build_vocabs(clean);
  MudeModel model(eval_model_config(), v.chars.size(), v.words.size(), 5);

  std::map<std::string, CorpusPair> corpora;
  for (NoiseKind k : all_noise_kinds()) {
    NoiseConfig cfg;
    cfg.seed = 50 + static_cast<uint64_t>(k);
    corpora[noise_kind_name(k)] = noise_corpus(clean, k, cfg);
  }
  GeneralizationMatrix m = cross_noise_matrix(
      [&](const std::string&) { return &model; },
      [&](const std::string& kind) -> const CorpusPair& { return corpora.at(kind); }, v);
  REQUIRE(m.kinds.size() == 8);
  REQUIRE(m.cells.size() == 8);
  for (size_t r = 0; r < 8; ++r) {
    REQUIRE(m.cells[r].size() == 8);
    double sum = 0.0;
    for (double c : m.cells[r]) {
      CHECK(std::isfinite(c));
      sum += c;
    }
    CHECK(m.row_means[r] == doctest::Approx(sum / 8.0));
  }
  // same model on every row: the diagonal equals the per-kind evaluation
  CHECK(m.cells[0][0] == doctest::Approx(evaluate(model, v, corpora.at("per")).accuracy));
  CHECK(m.table().find("MEAN") != std::string::npos);

  // a row mean over one absent cell averages the remaining values
  GeneralizationMatrix partial = m;
  partial.cells[0][0] = std::nan("");
  double expect = 0.0;
  for (size_t c = 1; c < 8; ++c) expect += partial.cells[0][c];
  expect /= 7.0;
  // recompute means the way the table formatter documents them
  double sum = 0.0;
  int64_t present = 0;
  for (double c : partial.cells[0])
    if (!std::isnan(c)) {
      sum += c;
      ++present;
    }
  CHECK(sum / static_cast<double>(present) == doctest::Approx(expect));
}

TEST_CASE("correct_sentence basics") {
  Corpus clean = eval_corpus(12, 55);
  Vocabs v = build_vocabs(clean);
  MudeModel model(eval_model_config(), v.chars.size(), v.words.size(), 5);

  CHECK(correct_sentence(model, v, "") == "");
  CHECK(correct_sentence(model, v, "   ") == "");

  const std::string out1 = correct_sentence(model, v, "the rivre opened the garden .");
  const std::string out2 = correct_sentence(model, v, "the rivre opened the garden .");
  CHECK(out1 == out2);
  // output has one token per input token
  std::istringstream is(out1);
  int count = 0;
  std::string tok;
  while (is >> tok) ++count;
  CHECK(count == 6);
}

TEST_CASE("checkpoint round trip is bit-exact and supports decoder skipping") {
  Corpus clean = eval_corpus(14, 61);
  NoiseConfig ncfg;
  ncfg.seed = 17;
  CorpusPair pair = noise_corpus(clean, NoiseKind::SUB, ncfg);
  Vocabs v = build_vocabs(clean);
  MudeModel model(eval_model_config(), v.chars.size(), v.words.size(), 5);

  TempDir dir("roundtrip");
  save_checkpoint(dir.path, model, v, {{"epoch", 3}, {"best_val_accuracy", 88.5}},
                  {{"opt.acc.test", {1.0, 2.0, 3.0}}});

  LoadedCheckpoint loaded = load_checkpoint(dir.path);
  CHECK(loaded.model->kind() == "mude");
  CHECK(loaded.vocabs.words.size() == v.words.size());
  CHECK(loaded.manifest.at("train").at("epoch") == 3);
  CHECK(loaded.extras.at("opt.acc.test") == std::vector<double>{1.0, 2.0, 3.0});

  ParamSet orig, rest;
  model.collect_params(orig);
  loaded.model->collect_params(rest);
  REQUIRE(orig.size() == rest.size());
  for (size_t i = 0; i < orig.size(); ++i)
    CHECK(orig.items()[i].tensor->values() == rest.items()[i].tensor->values());  // bitwise

  const EvalReport before = evaluate(model, v, pair);
  const EvalReport after = evaluate(*loaded.model, loaded.vocabs, pair);
  CHECK(before.accuracy == after.accuracy);
  CHECK(before.correct_words == after.correct_words);

  // loading without the decoder zeroes its parameters and evaluates the same
  LoadedCheckpoint lean = load_checkpoint(dir.path, /*with_decoder=*/false);
  ParamSet lean_params;
  lean.model->collect_params(lean_params);
  for (auto& it : lean_params.items())
    if (it.name.rfind("decoder.", 0) == 0)
      for (double x : it.tensor->values()) CHECK(x == 0.0);
  CHECK(evaluate(*lean.model, lean.vocabs, pair).accuracy == before.accuracy);

  // a second identical save produces byte-identical files
  TempDir dir2("roundtrip2");
  save_checkpoint(dir2.path, model, v, {{"epoch", 3}, {"best_val_accuracy", 88.5}},
                  {{"opt.acc.test", {1.0, 2.0, 3.0}}});
  const auto read_bytes = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };
  CHECK(read_bytes(dir.path + "/params.bin") == read_bytes(dir2.path + "/params.bin"));
  CHECK(read_bytes(dir.path + "/manifest.json") == read_bytes(dir2.path + "/manifest.json"));
}
